use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GroupError;

/// Square integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, GroupError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(GroupError::InvalidSpec("matrix must be nonempty".into()));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(GroupError::InvalidSpec(format!("matrix must be square ({dim}x{dim})")));
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    /// Parses `"1,1;0,1"` (rows separated by `;`, entries by `,`).
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim().parse::<i64>().map_err(|_| GroupError::InvalidSpec(format!("bad matrix entry {x:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.get(i, j);
            }
        }
        Self { dim: d, entries }
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let d = self.dim;
        let mut entries = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0i64;
                for k in 0..d {
                    acc = acc.checked_add(self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries[i * d + j] = acc;
            }
        }
        Some(Self { dim: d, entries })
    }

    pub fn checked_apply(&self, v: &[i64]) -> Option<Vec<i64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).try_fold(0i64, |acc, j| acc.checked_add(self.get(i, j).checked_mul(v[j])?)))
            .collect()
    }

    pub fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.to_big())
    }

    /// Exact inverse; only defined for unimodular matrices.
    pub fn unimodular_inverse(&self) -> Result<Self, GroupError> {
        let det = self.determinant();
        let sign: i64 = if det == BigInt::one() {
            1
        } else if det == -BigInt::one() {
            -1
        } else {
            return Err(GroupError::InvalidSpec(format!("matrix determinant is {det}, expected ±1")));
        };
        let d = self.dim;
        if d == 1 {
            return Ok(Self { dim: 1, entries: vec![sign] });
        }
        let big = self.to_big();
        let mut entries = vec![0i64; d * d];
        for i in 0..d {
            for j in 0..d {
                // adj(A)[i][j] = (-1)^(i+j) * minor(j, i)
                let minor: Vec<Vec<BigInt>> = big
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != j)
                    .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, x)| x.clone()).collect())
                    .collect();
                let mut cof = determinant(&minor);
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                let value: i64 = (cof * sign).try_into().map_err(|_| GroupError::Overflow("matrix inverse entry"))?;
                entries[i * d + j] = value;
            }
        }
        Ok(Self { dim: d, entries })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_shear() {
        let a = IntMatrix::parse("1,1;0,1").unwrap();
        let inv = a.unimodular_inverse().unwrap();
        assert_eq!(inv, IntMatrix::parse("1,-1;0,1").unwrap());
        assert_eq!(a.checked_mul(&inv).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn inverse_3x3() {
        let a = IntMatrix::parse("2,1,1;1,1,0;1,0,1").unwrap();
        // det = 2*1 - 1*1 + 1*(-1) = 0 -> not invertible
        assert!(a.unimodular_inverse().is_err());
        let b = IntMatrix::parse("0,0,1;1,0,-1;0,1,-1").unwrap();
        let inv = b.unimodular_inverse().unwrap();
        assert_eq!(b.checked_mul(&inv).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn determinant_with_pivot() {
        let m = IntMatrix::parse("0,1;1,0").unwrap();
        assert_eq!(m.determinant(), BigInt::from(-1));
        let m = IntMatrix::parse("2,0,0;0,3,0;0,0,4").unwrap();
        assert_eq!(m.determinant(), BigInt::from(24));
    }
}
