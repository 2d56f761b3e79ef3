use serde::{Deserialize, Serialize};

/// Radial bump supported in the closed ball `|x - center| <= radius`.
///
/// With `order = None` the profile is `exp(1 - 1/(1 - t^2))`, smooth and
/// equal to 1 at the center. With `order = Some(s)` it is `(1 - t^2)^(s+1)`,
/// which is `C^s` across the boundary sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffFunction {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default)]
    pub order: Option<u32>,
}

impl CutoffFunction {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        assert!(radius > 0.0, "cutoff radius must be positive");
        CutoffFunction { center, radius, order: None }
    }

    /// Smooth bump of radius 1 at the origin.
    pub fn unit(dim: usize) -> Self {
        Self::new(vec![0.0; dim], 1.0)
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = Some(order);
        self
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() / (self.radius * self.radius);
        if r2 >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - r2;
        match self.order {
            None => (1.0 - 1.0 / s).exp(),
            Some(k) => s.powi(k as i32 + 1),
        }
    }

    /// Bounding box `[c - r, c + r]` per axis.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.center.iter().map(|&c| (c - self.radius, c + self.radius)).collect()
    }
}
