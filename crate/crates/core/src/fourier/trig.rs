use std::collections::BTreeMap;

use num_complex::Complex64;

use super::FourierError;

/// A trigonometric polynomial `Σ c_k e^{2πi k·t}` on 𝕋ᵈ, stored as its
/// finitely supported coefficient map with no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, FourierError>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut out = Self::zero(dim);
        for (k, c) in terms {
            if k.len() != dim {
                return Err(FourierError::InvalidInput(format!(
                    "frequency {k:?} has dimension {}, expected {dim}",
                    k.len()
                )));
            }
            out.add(k, c);
        }
        Ok(out)
    }

    /// Indicator of a finite subset of ℤ.
    pub fn indicator<I: IntoIterator<Item = i64>>(set: I) -> Self {
        let mut out = Self::zero(1);
        for k in set {
            out.coeffs.insert(vec![k], Complex64::new(1.0, 0.0));
        }
        out
    }

    /// The Dirichlet kernel `D_n = 1_{[-n, n]}`.
    pub fn dirichlet(n: i64) -> Self {
        Self::indicator(-n..=n)
    }

    pub fn add(&mut self, k: Vec<i64>, c: Complex64) {
        let sum = self.coefficient(&k) + c;
        if sum == Complex64::default() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], Complex64)> {
        self.coeffs.iter().map(|(k, c)| (k.as_slice(), *c))
    }

    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Largest coordinate magnitude of a frequency in the support.
    pub fn degree(&self) -> u64 {
        self.coeffs.keys().flat_map(|k| k.iter().map(|x| x.unsigned_abs())).max().unwrap_or(0)
    }

    pub fn l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `δ_y * f`, i.e. every frequency shifted by `y`.
    pub fn translate(&self, y: &[i64]) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.iter().zip(y).map(|(a, b)| a + b).collect(), *c)).collect();
        Self { dim: self.dim, coeffs }
    }

    /// Direct evaluation at `t ∈ 𝕋ᵈ`.
    pub fn eval(&self, t: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let phase: f64 = k.iter().zip(t).map(|(&ki, &ti)| ki as f64 * ti).sum();
                c * Complex64::from_polar(1.0, std::f64::consts::TAU * phase)
            })
            .sum()
    }
}
