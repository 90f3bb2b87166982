//! Composite Gauss-Legendre rules on an interval.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::tolerance::{GL_ORDER, MAX_PANEL_WIDTH};

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let order = NonZeroUsize::new(GL_ORDER).expect("order is positive");
        GaussLegendre::new(order).as_node_weight_pairs().to_vec()
    })
}

/// Nodes and weights of a composite rule: `panels` equal panels on `[a, b]`,
/// each with the fixed-order Gauss-Legendre rule.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize) -> Self {
        let panels = panels.max(1);
        let rule = reference_rule();
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * rule.len());
        let mut weights = Vec::with_capacity(panels * rule.len());
        for p in 0..panels {
            let lo = a + width * p as f64;
            let mid = lo + 0.5 * width;
            for &(x, w) in rule {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        CompositeRule { nodes, weights }
    }

    /// Panel count so that no panel is wider than the configured maximum.
    pub fn with_max_width(a: f64, b: f64) -> Self {
        Self::new(a, b, panels_for(b - a))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

pub fn panels_for(width: f64) -> usize {
    ((width / MAX_PANEL_WIDTH).ceil() as usize).max(1)
}
