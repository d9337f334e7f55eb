use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactDft,
    Quadrature,
    PowerIteration,
    L1Bound,
    L2Bound,
    ProductRule,
    TranslationInvariance,
    ExtensionIsometry,
    /// Finite closed-form expression evaluated in floating point.
    ClosedForm,
    /// Asymptotic expansion with an explicit remainder width.
    Asymptotic,
}

/// An interval `[lower, upper]` containing a norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub lower: f64,
    pub upper: f64,
    pub method: Method,
    pub tolerance: f64,
    /// Points per axis of the last grid, for grid-based methods.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<u64>,
}

impl NormCertificate {
    pub fn exact(value: f64, method: Method) -> Self {
        Self { lower: value, upper: value, method, tolerance: 0.0, grid: None }
    }

    pub fn interval(lower: f64, upper: f64, method: Method, tolerance: f64) -> Self {
        debug_assert!(lower <= upper, "empty interval [{lower}, {upper}]");
        Self { lower, upper, method, tolerance, grid: None }
    }

    pub fn with_grid(mut self, grid: u64) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Multiplies both ends by a nonnegative factor.
    pub fn scaled(&self, factor: f64, method: Method) -> Self {
        Self {
            lower: self.lower * factor,
            upper: self.upper * factor,
            method,
            tolerance: self.tolerance,
            grid: self.grid,
        }
    }
}
