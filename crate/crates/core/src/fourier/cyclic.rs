use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{a_norm_torus, FourierError, Method, NormCertificate, TrigPoly};

/// `‖f‖_{A(ℤ_m)} = (1/m) Σ_j |f̂(j)|` for `f` given by its values on `0..m`.
pub fn finite_cyclic_a_norm(values: &[Complex64]) -> Result<f64, FourierError> {
    let m = values.len();
    if m == 0 {
        return Err(FourierError::InvalidInput("ℤ_m needs m ≥ 1".into()));
    }
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    Ok(buf.iter().map(|z| z.norm()).sum::<f64>() / m as f64)
}

/// `‖1_B‖_A / ln|B|` using the certified lower end of the A-norm.
pub fn hardy_ratio(set: &[i64], tol: f64) -> Result<f64, FourierError> {
    let mut b = set.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.len() < 2 {
        return Err(FourierError::InvalidInput(format!("|B| = {} but the ratio needs |B| ≥ 2", b.len())));
    }
    let cert = a_norm_torus(&TrigPoly::indicator(b.iter().copied()), tol)?;
    Ok(cert.lower / (b.len() as f64).ln())
}

/// Norm of `f₁ ⊗ … ⊗ f_d` on 𝕋ᵈ from one-dimensional factors.
pub fn tensor_norm(factors: &[TrigPoly], tol: f64) -> Result<NormCertificate, FourierError> {
    let certs = factors
        .iter()
        .map(|f| {
            if f.dim() != 1 {
                return Err(FourierError::InvalidInput(format!(
                    "tensor factors must be one-dimensional, got d = {}",
                    f.dim()
                )));
            }
            a_norm_torus(f, tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(tensor_certificate(&certs))
}

/// Product of certificates of tensor factors.
pub fn tensor_certificate(certs: &[NormCertificate]) -> NormCertificate {
    let lower = certs.iter().map(|c| c.lower).product();
    let upper = certs.iter().map(|c| c.upper).product();
    let tolerance = certs.iter().map(|c| c.tolerance).fold(0.0, f64::max);
    NormCertificate::interval(lower, upper, Method::ProductRule, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::dirichlet_l1;
    use std::f64::consts::PI;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn cyclic_examples() {
        assert!((finite_cyclic_a_norm(&real(&[1.0, 0.0, 0.0, 0.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((finite_cyclic_a_norm(&real(&[1.0; 6])).unwrap() - 1.0).abs() < 1e-15);
        let v = finite_cyclic_a_norm(&real(&[1.0, 1.0, 0.0, 0.0])).unwrap();
        assert!((v - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(finite_cyclic_a_norm(&[]).is_err());
    }

    #[test]
    fn hardy_pair() {
        let r = hardy_ratio(&[0, 1], 1e-10).unwrap();
        assert!((r - 4.0 / PI / 2f64.ln()).abs() < 1e-9);
        let far = hardy_ratio(&[0, 3i64.pow(20)], 1e-10).unwrap();
        assert!((far - r).abs() < 1e-12);
        assert!(hardy_ratio(&[5, 5], 1e-6).is_err());
    }

    #[test]
    fn tensor_examples() {
        let one =
            tensor_norm(&[TrigPoly::indicator([0]), TrigPoly::indicator([0]), TrigPoly::indicator([0])], 1e-9).unwrap();
        assert_eq!((one.lower, one.upper), (1.0, 1.0));
        let sq = tensor_norm(&[TrigPoly::dirichlet(1), TrigPoly::dirichlet(1)], 1e-10).unwrap();
        let l1 = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
        assert!((sq.value() - l1 * l1).abs() < 1e-9);
        let d4 = dirichlet_l1(4, 1e-10).unwrap();
        let box4 = tensor_certificate(&[d4.clone(), d4.clone()]);
        assert!((box4.value() - d4.value().powi(2)).abs() < 1e-12);
        assert_eq!(box4.method, Method::ProductRule);
    }
}
