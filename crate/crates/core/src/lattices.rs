//! Finite-index subgroups of Z^n, stored in column Hermite normal form.
//!
//! The basis matrix is lower triangular; its columns generate the lattice.
//! Diagonal entries are positive and every entry left of the diagonal lies
//! in `[0, diagonal)` of its row, so equal lattices have identical matrices.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::freewords::IntVector;
use crate::limits;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    n: usize,
    /// `basis[row][col]`
    basis: Vec<Vec<BigInt>>,
}

/// Column-style lower-triangular HNF of the span of `columns` in Z^rows.
/// Returns `None` when the span has rank below `rows`.
pub(crate) fn hnf_columns(rows: usize, columns: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigInt>>> {
    let mut cols: Vec<Vec<BigInt>> = columns
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for i in 0..rows {
        loop {
            let p = cols
                .iter()
                .enumerate()
                .filter(|(_, c)| !c[i].is_zero())
                .min_by(|(_, a), (_, b)| a[i].abs().cmp(&b[i].abs()))
                .map(|(idx, _)| idx)?;
            let pivot = cols[p].clone();
            let mut done = true;
            for (q, col) in cols.iter_mut().enumerate() {
                if q == p || col[i].is_zero() {
                    continue;
                }
                let quot = col[i].div_floor(&pivot[i]);
                for (x, y) in col.iter_mut().zip(&pivot) {
                    *x -= &quot * y;
                }
                if !col[i].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        let p = cols.iter().position(|c| !c[i].is_zero())?;
        let mut pivot = cols.swap_remove(p);
        if pivot[i].is_negative() {
            pivot.iter_mut().for_each(|x| *x = -x.clone());
        }
        pivots.push(pivot);
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    for i in 1..rows {
        let (left, right) = pivots.split_at_mut(i);
        let piv = &right[0];
        for col in left.iter_mut() {
            let quot = col[i].div_floor(&piv[i]);
            if !quot.is_zero() {
                for (x, y) in col.iter_mut().zip(piv) {
                    *x -= &quot * y;
                }
            }
        }
    }
    Some(pivots)
}

/// `{ bottom : (0, bottom) ∈ span(columns) }` where every column is the
/// concatenation `top ++ bottom` of two length-`n` vectors and the columns
/// span a full-rank lattice of Z^{2n}.
fn kernel_of_top(n: usize, columns: Vec<Vec<BigInt>>) -> Lattice {
    let h = hnf_columns(2 * n, columns).expect("block matrix has full rank");
    let cols: Vec<Vec<BigInt>> = h[n..].iter().map(|c| c[n..].to_vec()).collect();
    Lattice::from_hnf_columns(n, cols)
}

impl Lattice {
    pub fn whole(n: usize) -> Lattice {
        Lattice::scalar(n, &BigInt::one())
    }

    /// `m · Z^n`.
    pub fn scalar(n: usize, m: &BigInt) -> Lattice {
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { m.abs() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Lattice { n, basis }
    }

    fn from_hnf_columns(n: usize, cols: Vec<Vec<BigInt>>) -> Lattice {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect();
        Lattice { n, basis }
    }

    pub fn from_generators(n: usize, vectors: &[IntVector]) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for v in vectors {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        let cols = vectors.iter().map(|v| v.0.clone()).collect();
        match hnf_columns(n, cols) {
            Some(h) => Ok(Lattice::from_hnf_columns(n, h)),
            None => Err(Error::InfiniteIndex(format!(
                "generators span a subgroup of rank < {n} in Z^{n}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.n).map(|i| self.basis[i][j].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn index(&self) -> BigInt {
        (0..self.n).map(|i| self.basis[i][i].clone()).product()
    }

    pub fn index_u64(&self) -> u64 {
        self.index().to_u64().unwrap_or(u64::MAX)
    }

    fn check_dim(&self, m: usize) -> Result<()> {
        if m == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: m,
            })
        }
    }

    /// Integer coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &IntVector) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(v.dim())?;
        let mut x: Vec<BigInt> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut rem = v.0[i].clone();
            for (j, xj) in x.iter().enumerate() {
                rem -= &self.basis[i][j] * xj;
            }
            let (q, r) = rem.div_rem(&self.basis[i][i]);
            if !r.is_zero() {
                return Ok(None);
            }
            x.push(q);
        }
        Ok(Some(x))
    }

    pub fn contains(&self, v: &IntVector) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subgroup_of(&self, other: &Lattice) -> Result<bool> {
        other.check_dim(self.n)?;
        for c in self.columns() {
            if !other.contains(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.n)?;
        let n = self.n;
        let mut cols = Vec::with_capacity(2 * n);
        for c in self.columns() {
            let mut v = c.0.clone();
            v.extend(c.0);
            cols.push(v);
        }
        for c in other.columns() {
            let mut v = c.0;
            v.extend(std::iter::repeat(BigInt::zero()).take(n));
            cols.push(v);
        }
        Ok(kernel_of_top(n, cols))
    }

    /// `{ x ∈ Z^n : A x ∈ self }` for an integer matrix `A` given by rows.
    pub fn preimage(&self, a: &[Vec<BigInt>]) -> Result<Lattice> {
        self.check_dim(a.len())?;
        let n = self.n;
        let mut cols = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut v: Vec<BigInt> = (0..n).map(|i| a[i][j].clone()).collect();
            v.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            cols.push(v);
        }
        for c in self.columns() {
            let mut v = c.0;
            v.extend(std::iter::repeat(BigInt::zero()).take(n));
            cols.push(v);
        }
        Ok(kernel_of_top(n, cols))
    }

    /// Canonical coset representative of `v` modulo the lattice: every
    /// coordinate reduced into `[0, diagonal)` by back substitution.
    pub fn reduce(&self, v: &IntVector) -> IntVector {
        let mut r = v.clone();
        for i in 0..self.n {
            let q = r.0[i].div_floor(&self.basis[i][i]);
            if !q.is_zero() {
                for k in i..self.n {
                    r.0[k] -= &q * &self.basis[k][i];
                }
            }
        }
        r
    }

    /// Canonical coset representatives, one per coset, sorted.
    pub fn coset_representatives(&self) -> Vec<IntVector> {
        let diag: Vec<i64> = (0..self.n)
            .map(|i| self.basis[i][i].to_i64().expect("index fits i64"))
            .collect();
        let mut reps = vec![IntVector::zero(self.n)];
        for (i, d) in diag.iter().enumerate() {
            let mut next = Vec::new();
            for r in &reps {
                for t in 0..*d {
                    let mut v = r.clone();
                    v.0[i] = BigInt::from(t);
                    next.push(v);
                }
            }
            reps = next;
        }
        reps.sort();
        reps
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.index().cmp(&other.index()))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl fmt::Display for Lattice {
    /// One-line form: `Z <n> [col,col,...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z {} [", self.n)?;
        for (j, c) in self.columns().iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// All lattices of index at most `max_index` in Z^n, sorted by index and
/// then by basis matrix.
pub fn enumerate_lattices(n: usize, max_index: u64) -> Result<Vec<Lattice>> {
    if n == 0 || max_index == 0 {
        return Err(Error::Precondition(
            "enumerate_lattices needs n >= 1 and N >= 1".into(),
        ));
    }
    let mut diagonals: Vec<Vec<u64>> = Vec::new();
    fn rec(n: usize, budget: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for d in 1..=budget {
            cur.push(d);
            rec(n, budget / d, cur, out);
            cur.pop();
        }
    }
    rec(n, max_index, &mut Vec::new(), &mut diagonals);

    // each row i contributes d_i^i choices for its off-diagonal entries
    let total: u64 = diagonals
        .iter()
        .map(|d| {
            d.iter()
                .enumerate()
                .map(|(i, &di)| di.saturating_pow(i as u32))
                .fold(1u64, |a, b| a.saturating_mul(b))
        })
        .fold(0u64, |a, b| a.saturating_add(b));
    limits::check(total, || {
        format!("{total} lattices of index <= {max_index} in Z^{n}")
    })?;

    let mut out = Vec::with_capacity(total as usize);
    for diag in diagonals {
        let mut partial: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
        for (i, &di) in diag.iter().enumerate() {
            let mut next = Vec::new();
            for rows in &partial {
                let mut choices: Vec<Vec<BigInt>> = vec![Vec::new()];
                for _ in 0..i {
                    choices = choices
                        .into_iter()
                        .flat_map(|c| {
                            (0..di).map(move |t| {
                                let mut c = c.clone();
                                c.push(BigInt::from(t));
                                c
                            })
                        })
                        .collect();
                }
                for mut row in choices {
                    row.push(BigInt::from(di));
                    row.extend(std::iter::repeat(BigInt::zero()).take(n - i - 1));
                    let mut r = rows.clone();
                    r.push(row);
                    next.push(r);
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(|basis| Lattice { n, basis }));
    }
    out.sort();
    Ok(out)
}

/// `(Z^n)_{<= N}`: the intersection of all lattices of index at most `N`.
pub fn profinite_kernel(n: usize, max_index: u64) -> Result<Lattice> {
    let all = enumerate_lattices(n, max_index)?;
    let mut k = Lattice::whole(n);
    for l in &all {
        k = k.intersect(l)?;
    }
    Ok(k)
}
