//! Exact square matrices over Q.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{parse_err, Error, Result};
use crate::freewords::IntVector;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    n: usize,
    rows: Vec<Vec<BigRational>>,
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<RationalMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Ok(RationalMatrix { n, rows })
    }

    pub fn identity(n: usize) -> RationalMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        RationalMatrix { n, rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<RationalMatrix> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational(x, 1)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn det(&self) -> BigRational {
        let mut a = self.rows.clone();
        let n = self.n;
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv = RationalMatrix::identity(n).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for k in 0..n {
                a[c][k] /= &piv;
                inv[c][k] /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        Ok(RationalMatrix { n, rows: inv })
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `M·v` if it is integral.
    pub fn apply_int(&self, v: &IntVector) -> Option<IntVector> {
        let q: Vec<BigRational> = v.0.iter().map(|x| BigRational::from(x.clone())).collect();
        let out = self.apply(&q);
        out.iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntVector)
    }

    /// Least common denominator of all entries.
    pub fn denominator(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `D·M` as an integer matrix for `D = denominator()`.
    pub fn scaled_integer(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let d = self.denominator();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x * BigRational::from(d.clone())).to_integer())
                    .collect()
            })
            .collect();
        (d, rows)
    }

    /// Parses `n` whitespace-separated rows of `p/q` (or integer) entries.
    pub fn parse_rows(lines: &[&str], n: usize, first_line: usize) -> Result<RationalMatrix> {
        if lines.len() != n {
            return Err(parse_err(
                first_line,
                format!("expected {n} matrix rows, found {}", lines.len()),
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.iter().enumerate() {
            let entries: Vec<BigRational> = line
                .split_whitespace()
                .map(|t| parse_rational(t).ok_or_else(|| parse_err(first_line + i, format!("bad rational {t:?}"))))
                .collect::<Result<_>>()?;
            if entries.len() != n {
                return Err(parse_err(
                    first_line + i,
                    format!("expected {n} entries, found {}", entries.len()),
                ));
            }
            rows.push(entries);
        }
        RationalMatrix::new(rows)
    }
}

pub fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => Some(BigRational::from(t.parse::<BigInt>().ok()?)),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &rhs.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        RationalMatrix { n, rows }
    }
}

impl fmt::Display for RationalMatrix {
    /// One row per line, entries as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = RationalMatrix::from_i64(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.det(), rational(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RationalMatrix::identity(2));
        let s = RationalMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.det(), rational(0, 1));
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn parse_and_print() {
        let m = RationalMatrix::parse_rows(&["1/2 0", "3 -2/4"], 2, 1).unwrap();
        assert_eq!(m.get(1, 1), &rational(-1, 2));
        assert_eq!(m.to_string(), "1/2 0/1\n3/1 -1/2");
        assert!(RationalMatrix::parse_rows(&["1/0 1", "1 1"], 2, 1).is_err());
        assert!(RationalMatrix::parse_rows(&["1 1"], 2, 1).is_err());
    }

    #[test]
    fn scaled_integer_clears_denominators() {
        let m = RationalMatrix::parse_rows(&["1/2 1/3", "0 1"], 2, 1).unwrap();
        let (d, a) = m.scaled_integer();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(a[0], vec![BigInt::from(3), BigInt::from(2)]);
    }
}
