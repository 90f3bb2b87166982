use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{coherent_overlap, quadrature_overlap, Amplitude};
use crate::error::{Error, Result};
use crate::tolerance::{COALESCE, DEGENERATE_NORM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub weight: Amplitude,
    pub amplitude: Amplitude,
}

/// `Σ_i w_i |α_i⟩` with pairwise distinct amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentSuperposition {
    terms: Vec<Term>,
    normalized: bool,
}

fn check_finite(z: Amplitude, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

impl CoherentSuperposition {
    /// Builds a superposition from `(weight, amplitude)` pairs. Amplitudes
    /// within the coalescing distance are merged and their weights summed;
    /// terms left with an exactly zero weight are dropped.
    pub fn new(terms: impl IntoIterator<Item = (Amplitude, Amplitude)>) -> Result<Self> {
        let mut merged: Vec<Term> = Vec::new();
        for (weight, amplitude) in terms {
            check_finite(weight, "superposition weight")?;
            check_finite(amplitude, "coherent amplitude")?;
            match merged
                .iter_mut()
                .find(|t| (t.amplitude - amplitude).norm() <= COALESCE)
            {
                Some(t) => t.weight += weight,
                None => merged.push(Term { weight, amplitude }),
            }
        }
        merged.retain(|t| t.weight != Complex64::new(0.0, 0.0));
        if merged.is_empty() {
            return Err(Error::DegenerateState(
                "superposition has no term with a nonzero weight".into(),
            ));
        }
        Ok(CoherentSuperposition {
            terms: merged,
            normalized: false,
        })
    }

    pub fn coherent(alpha: Amplitude) -> Self {
        CoherentSuperposition {
            terms: vec![Term {
                weight: Complex64::new(1.0, 0.0),
                amplitude: alpha,
            }],
            normalized: true,
        }
    }

    pub fn vacuum() -> Self {
        Self::coherent(Complex64::new(0.0, 0.0))
    }

    /// Equal-weight `|β⟩ + |−β⟩`, normalized. Collapses to the vacuum when `β ≈ 0`.
    pub fn even_cat(beta: Amplitude) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::new([(one, beta), (one, -beta)])?.normalized()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn max_amplitude(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude.norm())
            .fold(0.0, f64::max)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Amplitude {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                acc += a.weight.conj() * b.weight * coherent_overlap(a.amplitude, b.amplitude);
            }
        }
        acc
    }

    /// Squared norm from the Gram matrix; clamped at zero against roundoff.
    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re.max(0.0)
    }

    pub fn norm(&self) -> Result<f64> {
        let n = self.norm_sqr().sqrt();
        if n < DEGENERATE_NORM {
            Err(Error::DegenerateState(format!(
                "superposition norm {n:e} is below {DEGENERATE_NORM:e}"
            )))
        } else {
            Ok(n)
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        if self.normalized {
            return Ok(self);
        }
        let n = self.norm()?;
        for t in &mut self.terms {
            t.weight /= n;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn scaled(mut self, factor: Amplitude) -> Self {
        for t in &mut self.terms {
            t.weight *= factor;
        }
        self.normalized = false;
        self
    }

    /// Weight on the term whose amplitude coalesces with `alpha`, zero if none.
    pub fn weight_at(&self, alpha: Amplitude) -> Amplitude {
        self.terms
            .iter()
            .find(|t| (t.amplitude - alpha).norm() <= COALESCE)
            .map_or(Complex64::new(0.0, 0.0), |t| t.weight)
    }
}

/// Gram-matrix norm `√(Σ_ij conj(w_i) w_j ⟨α_i|α_j⟩)`.
pub fn superposition_norm(s: &CoherentSuperposition) -> Result<f64> {
    s.norm()
}

pub fn superposition_inner(a: &CoherentSuperposition, b: &CoherentSuperposition) -> Amplitude {
    a.inner(b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeTerm {
    pub weight: Amplitude,
    pub amp_a: Amplitude,
    pub amp_b: Amplitude,
}

/// `Σ_k w_k |α_k⟩_a |β_k⟩_b` with pairwise distinct amplitude pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeSuperposition {
    terms: Vec<TwoModeTerm>,
    normalized: bool,
}

impl TwoModeSuperposition {
    pub fn new(terms: impl IntoIterator<Item = (Amplitude, Amplitude, Amplitude)>) -> Result<Self> {
        let mut merged: Vec<TwoModeTerm> = Vec::new();
        for (weight, amp_a, amp_b) in terms {
            check_finite(weight, "superposition weight")?;
            check_finite(amp_a, "coherent amplitude")?;
            check_finite(amp_b, "coherent amplitude")?;
            match merged.iter_mut().find(|t| {
                (t.amp_a - amp_a).norm() <= COALESCE && (t.amp_b - amp_b).norm() <= COALESCE
            }) {
                Some(t) => t.weight += weight,
                None => merged.push(TwoModeTerm {
                    weight,
                    amp_a,
                    amp_b,
                }),
            }
        }
        merged.retain(|t| t.weight != Complex64::new(0.0, 0.0));
        if merged.is_empty() {
            return Err(Error::DegenerateState(
                "two-mode superposition has no term with a nonzero weight".into(),
            ));
        }
        Ok(TwoModeSuperposition {
            terms: merged,
            normalized: false,
        })
    }

    /// `a ⊗ b`.
    pub fn product(a: &CoherentSuperposition, b: &CoherentSuperposition) -> Result<Self> {
        let mut out = Self::new(a.terms().iter().flat_map(|ta| {
            b.terms()
                .iter()
                .map(move |tb| (ta.weight * tb.weight, ta.amplitude, tb.amplitude))
        }))?;
        out.normalized = a.is_normalized() && b.is_normalized();
        Ok(out)
    }

    pub fn terms(&self) -> &[TwoModeTerm] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn max_amplitude(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amp_a.norm().max(t.amp_b.norm()))
            .fold(0.0, f64::max)
    }

    pub fn inner(&self, other: &Self) -> Amplitude {
        let mut acc = Complex64::new(0.0, 0.0);
        for s in &self.terms {
            for o in &other.terms {
                acc += s.weight.conj()
                    * o.weight
                    * coherent_overlap(s.amp_a, o.amp_a)
                    * coherent_overlap(s.amp_b, o.amp_b);
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re.max(0.0)
    }

    pub fn norm(&self) -> Result<f64> {
        let n = self.norm_sqr().sqrt();
        if n < DEGENERATE_NORM {
            Err(Error::DegenerateState(format!(
                "two-mode norm {n:e} is below {DEGENERATE_NORM:e}"
            )))
        } else {
            Ok(n)
        }
    }

    pub fn normalized(mut self) -> Result<Self> {
        if self.normalized {
            return Ok(self);
        }
        let n = self.norm()?;
        for t in &mut self.terms {
            t.weight /= n;
        }
        self.normalized = true;
        Ok(self)
    }

    /// Unnormalized state of mode b after projecting mode a onto `⟨X = x|`:
    /// `Σ_k w_k ⟨x|α_k⟩ |β_k⟩`.
    pub fn project_mode_a(&self, x: f64) -> Result<CoherentSuperposition> {
        CoherentSuperposition::new(
            self.terms
                .iter()
                .map(|t| (t.weight * quadrature_overlap(x, t.amp_a), t.amp_b)),
        )
    }
}

/// 50:50 beam splitter, `|α⟩|β⟩ → |(α+β)/√2⟩|(α−β)/√2⟩` on every term.
pub fn beam_splitter_50_50(input: &TwoModeSuperposition) -> TwoModeSuperposition {
    let terms = input.terms.iter().map(|t| {
        (
            t.weight,
            (t.amp_a + t.amp_b) * FRAC_1_SQRT_2,
            (t.amp_a - t.amp_b) * FRAC_1_SQRT_2,
        )
    });
    // the map is injective on distinct pairs, so coalescing can only merge what was already equal
    let mut out = TwoModeSuperposition::new(terms).expect("beam splitter keeps nonzero weights");
    out.normalized = input.normalized;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Complex64::new(re, im)
    }
    const ONE: Amplitude = Complex64::new(1.0, 0.0);

    #[test]
    fn norm_examples() {
        let single = CoherentSuperposition::new([(ONE, c(1.5, -0.5))]).unwrap();
        assert_abs_diff_eq!(superposition_norm(&single).unwrap(), 1.0, epsilon = 1e-15);

        let coalesced = CoherentSuperposition::new([(ONE, c(0.0, 0.0)), (ONE, c(-0.0, 0.0))]).unwrap();
        assert_eq!(coalesced.len(), 1);
        assert_abs_diff_eq!(superposition_norm(&coalesced).unwrap(), 2.0, epsilon = 1e-15);

        let pair = CoherentSuperposition::new([(ONE, c(1.0, 0.0)), (ONE, c(-1.0, 0.0))]).unwrap();
        // √(2 + 2e^{-2})
        assert_abs_diff_eq!(superposition_norm(&pair).unwrap(), 1.5068744362000523, epsilon = 1e-14);
    }

    #[test]
    fn cancelling_weights_are_degenerate() {
        let r = CoherentSuperposition::new([(ONE, c(0.3, 0.0)), (-ONE, c(0.3, 0.0))]);
        assert!(matches!(r, Err(Error::DegenerateState(_))));
        let r = CoherentSuperposition::new([(ONE, c(0.3, 0.0)), (-ONE, c(0.3 + 1e-9, 0.0))]);
        // amplitudes 1e-9 apart are kept distinct
        assert_eq!(r.unwrap().len(), 2);
    }

    #[test]
    fn non_finite_rejected() {
        let r = CoherentSuperposition::new([(ONE, c(f64::NAN, 0.0))]);
        assert_eq!(r, Err(Error::NonFinite("coherent amplitude")));
    }

    #[test]
    fn inner_examples() {
        let vac = CoherentSuperposition::vacuum();
        assert_abs_diff_eq!(superposition_inner(&vac, &vac).re, 1.0);
        let degenerate = CoherentSuperposition::even_cat(c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(superposition_inner(&vac, &degenerate).re, 1.0, epsilon = 1e-15);
        let cat = CoherentSuperposition::even_cat(c(1.0, 0.0)).unwrap();
        // 2e^{-1/2}/√(2+2e^{-2})
        let v = superposition_inner(&vac, &cat);
        assert_abs_diff_eq!(v.re, 0.805018182194592, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn beam_splitter_examples() {
        let a = c(0.8, -0.3);
        let zero = c(0.0, 0.0);
        let s = |x, y| {
            let st = TwoModeSuperposition::new([(ONE, x, y)]).unwrap();
            beam_splitter_50_50(&st).terms()[0]
        };
        let t = s(a, a);
        assert!((t.amp_a - a * std::f64::consts::SQRT_2).norm() < 1e-15);
        assert_eq!(t.amp_b, zero);
        let t = s(a, zero);
        assert_eq!(t.amp_a, a * FRAC_1_SQRT_2);
        assert_eq!(t.amp_b, a * FRAC_1_SQRT_2);
        let t = s(zero, zero);
        assert_eq!((t.amp_a, t.amp_b), (zero, zero));
    }

    #[test]
    fn projection_of_product_factorizes() {
        let b = CoherentSuperposition::even_cat(c(0.9, 0.2)).unwrap();
        let prod = TwoModeSuperposition::product(&CoherentSuperposition::coherent(c(0.4, 0.4)), &b).unwrap();
        let proj = prod.project_mode_a(0.3).unwrap().normalized().unwrap();
        let f = superposition_inner(&b, &proj).norm_sqr();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-14);
    }

    fn small_amp() -> impl Strategy<Value = Amplitude> {
        (-2.5f64..2.5, -2.5f64..2.5).prop_map(|(r, i)| c(r, i))
    }

    fn superposition() -> impl Strategy<Value = CoherentSuperposition> {
        proptest::collection::vec((small_amp(), small_amp()), 1..5).prop_filter_map(
            "degenerate",
            |terms| {
                let s = CoherentSuperposition::new(terms).ok()?;
                s.norm().ok()?;
                Some(s)
            },
        )
    }

    proptest! {
        #[test]
        fn norm_and_inner_consistent(a in superposition(), b in superposition()) {
            let n = superposition_norm(&a).unwrap();
            prop_assert!((n * n - superposition_inner(&a, &a).re).abs() <= 1e-12 * n * n.max(1.0));
            let ab = superposition_inner(&a, &b);
            let ba = superposition_inner(&b, &a);
            prop_assert!((ab - ba.conj()).norm() <= 1e-12 * ab.norm().max(1.0));
        }

        #[test]
        fn beam_splitter_preserves_norm(a in superposition(), b in superposition()) {
            let st = TwoModeSuperposition::product(&a, &b).unwrap();
            let out = beam_splitter_50_50(&st);
            let (n_in, n_out) = (st.norm_sqr(), out.norm_sqr());
            prop_assert!((n_in - n_out).abs() <= 1e-12 * n_in.max(1.0));

            // the splitter is real symmetric and squares to the identity
            let twice = beam_splitter_50_50(&out);
            for (t, u) in st.terms().iter().zip(twice.terms()) {
                let scale = 1e-15 * (1.0 + t.amp_a.norm() + t.amp_b.norm());
                prop_assert!((t.amp_a - u.amp_a).norm() <= 4.0 * scale);
                prop_assert!((t.amp_b - u.amp_b).norm() <= 4.0 * scale);
                prop_assert_eq!(t.weight, u.weight);
            }
        }
    }
}
