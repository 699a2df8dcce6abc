//! Exact matrices and canonical subspaces over GF(p).
//!
//! A [`Subspace`] is stored as the reduced row echelon form of any spanning
//! set with the zero rows dropped. RREF is unique, so structural equality and
//! hashing on the basis matrix coincide with equality of subspaces.

use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Budget, Error, Result};
use crate::field::{Prime, Scalar};

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    prime: Prime,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            prime,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Matrix::zeros(prime, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(prime: Prime, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(prime, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % prime.value();
        }
        m
    }

    /// Builds a matrix from rows of equal length; entries are reduced mod p.
    pub fn from_rows<R: AsRef<[u32]>>(prime: Prime, cols: usize, rows: &[R]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&x| x % prime.value()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            prime,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<R: AsRef<[u32]>>(prime: Prime, rows: usize, cols: &[R]) -> Result<Self> {
        Ok(Matrix::from_rows(prime, rows, cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn scalar(&self, r: usize, c: usize) -> Scalar {
        Scalar::new(self.get(r, c) as u64, self.prime)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.prime.value();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(<[u32]>::to_vec).collect()
    }

    fn check_modulus(&self, other: &Matrix) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::ModulusMismatch {
                left: self.prime.value(),
                right: other.prime.value(),
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.prime, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let p = self.prime.value() as u64;
        let mut out = Matrix::zeros(self.prime, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a as u64 * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = v as u32;
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| dot(self.prime, self.row(r), v))
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_modulus(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let p = self.prime;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<u32>) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            prime: self.prime,
            data,
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let p = self.prime;
        let c = c % p.value();
        self.with_data(self.data.iter().map(|&a| p.mul(a, c)).collect())
    }

    pub fn neg(&self) -> Matrix {
        let p = self.prime;
        self.with_data(self.data.iter().map(|&a| p.neg(a)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    /// Reduced row echelon form, the rank and the pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let p = self.prime;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..cols {
                    m.data.swap(pr * cols + j, lead * cols + j);
                }
            }
            let inv = p.inv(m.get(lead, c)).expect("pivot is nonzero");
            if inv != 1 {
                for j in c..cols {
                    let v = m.get(lead, j);
                    m.data[lead * cols + j] = p.mul(v, inv);
                }
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = p.sub(m.get(r, j), p.mul(f, m.get(lead, j)));
                    m.data[r * cols + j] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        let rank = pivots.len();
        m.data.truncate(rank * cols);
        m.rows = rank;
        (m, pivots)
    }

    /// RREF with zero rows removed, plus the rank.
    pub fn rref(&self) -> (Matrix, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis (as rows) of the right null space `{x : self · x = 0}`.
    pub fn kernel(&self) -> Matrix {
        let p = self.prime;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(p, free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.data[i * self.cols + f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                out.data[i * self.cols + pc] = p.neg(r.get(row, f));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.prime, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.prime, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = red.get(r, n + c);
            }
        }
        Some(inv)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_modulus(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            prime: self.prime,
            data,
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<GF({})>{:?}", self.prime, self.to_rows())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for row in self.row_iter() {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

#[inline]
pub(crate) fn dot(p: Prime, a: &[u32], b: &[u32]) -> u32 {
    let q = p.value() as u64;
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + x as u64 * y as u64) % q;
    }
    acc as u32
}

/// A linear subspace of GF(p)^m in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn zero(prime: Prime, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(prime, 0, ambient),
        }
    }

    pub fn full(prime: Prime, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(prime, ambient),
        }
    }

    /// Canonical subspace spanned by `vectors`.
    pub fn span<R: AsRef<[u32]>>(prime: Prime, ambient: usize, vectors: &[R]) -> Result<Self> {
        let m = Matrix::from_rows(prime, ambient, vectors)?;
        Ok(Subspace::row_space(&m))
    }

    pub fn row_space(m: &Matrix) -> Self {
        Subspace { basis: m.rref().0 }
    }

    /// Standard basis vector `e_i` (zero-indexed).
    pub fn unit(ambient: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; ambient];
        v[i] = 1;
        v
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn prime(&self) -> Prime {
        self.basis.prime
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.basis.row_iter()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        self.basis.check_modulus(&other.basis)?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        Subspace::row_space(&self.basis.kernel())
    }

    /// Exact intersection, computed as `ann(ann(A) + ann(B))`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        if self.contains_unchecked(other) {
            return Ok(other.clone());
        }
        if other.contains_unchecked(self) {
            return Ok(self.clone());
        }
        let ann = self.annihilator().sum(&other.annihilator())?;
        Ok(ann.annihilator())
    }

    /// Reduces `v` against the basis; zero iff `v` lies in the subspace.
    fn residue(&self, v: &mut [u32]) {
        let p = self.prime();
        for row in self.basis.row_iter() {
            let pc = row
                .iter()
                .position(|&x| x != 0)
                .expect("rref rows are nonzero");
            let f = v[pc];
            if f == 0 {
                continue;
            }
            for (slot, &r) in v.iter_mut().zip(row).skip(pc) {
                *slot = p.sub(*slot, p.mul(f, r));
            }
        }
    }

    pub fn contains_vector(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: v.len(),
            });
        }
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.prime().value()).collect();
        self.residue(&mut w);
        Ok(w.iter().all(|&x| x == 0))
    }

    fn contains_unchecked(&self, other: &Subspace) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        let mut buf = vec![0; self.ambient_dim()];
        other.basis_rows().all(|row| {
            buf.copy_from_slice(row);
            self.residue(&mut buf);
            buf.iter().all(|&x| x == 0)
        })
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.contains_unchecked(other))
    }

    /// Equality with an ambient/modulus compatibility check.
    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        Ok(self == other)
    }

    /// Containment in either direction.
    pub fn incident(&self, other: &Subspace) -> Result<bool> {
        Ok(self.contains(other)? || other.contains(self)?)
    }

    /// Image under the linear map `x ↦ m·x`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: m.cols,
            });
        }
        // Rows of B·mᵀ are the images of the basis rows.
        Ok(Subspace::row_space(&self.basis.mul(&m.transpose())?))
    }

    /// Embeds a subspace given in coordinates relative to this basis.
    pub fn embed(&self, coords: &Subspace) -> Result<Subspace> {
        if coords.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: coords.ambient_dim(),
            });
        }
        Ok(Subspace::row_space(&coords.basis.mul(&self.basis)?))
    }

    /// Vector with coordinates `coeffs` relative to this basis.
    pub fn combination(&self, coeffs: &[u32]) -> Vec<u32> {
        let p = self.prime();
        let mut v = vec![0; self.ambient_dim()];
        for (row, &c) in self.basis_rows().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (slot, &x) in v.iter_mut().zip(row) {
                *slot = p.add(*slot, p.mul(c, x));
            }
        }
        v
    }

    /// Rebuilds a subspace from serialized basis rows, canonicalizing them.
    pub fn from_rows(prime: Prime, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Subspace::span(prime, ambient, rows)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis.to_rows())
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// Gaussian binomial coefficient `[m choose d]_q`, i.e. the number of
/// d-dimensional subspaces of GF(q)^m. Saturates at `u128::MAX`.
pub fn gaussian_binomial(m: usize, d: usize, q: u64) -> u128 {
    if d > m {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        let a = q.checked_pow((m - i) as u32).map(|x| x - 1);
        let b = q.checked_pow((i + 1) as u32).map(|x| x - 1);
        match (
            a.and_then(|a| num.checked_mul(a)),
            b.and_then(|b| den.checked_mul(b)),
        ) {
            (Some(n), Some(dd)) => {
                num = n;
                den = dd;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every `d`-dimensional subspace of GF(p)^m exactly once.
///
/// Order: pivot-column sets in lexicographic order, then the free RREF
/// entries as an odometer (last entry fastest).
pub fn enumerate_subspaces(
    prime: Prime,
    m: usize,
    d: usize,
    budget: Budget,
) -> Result<SubspaceIter> {
    if d > m {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {d} exceeds ambient dimension {m}"
        )));
    }
    let count = gaussian_binomial(m, d, prime.value() as u64);
    budget.check(
        &format!("enumerating {d}-subspaces of GF({prime})^{m}"),
        count,
    )?;
    Ok(SubspaceIter::new(prime, m, d))
}

/// Iterator behind [`enumerate_subspaces`].
#[derive(Debug)]
pub struct SubspaceIter {
    prime: Prime,
    m: usize,
    d: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    values: Vec<u32>,
    fresh: bool,
}

impl SubspaceIter {
    fn new(prime: Prime, m: usize, d: usize) -> Self {
        let pivots: Vec<usize> = (0..d).collect();
        let mut it = SubspaceIter {
            prime,
            m,
            d,
            pivots: Some(pivots),
            free: Vec::new(),
            values: Vec::new(),
            fresh: true,
        };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        let Some(pivots) = &self.pivots else { return };
        self.free.clear();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..self.m {
                if !pivots.contains(&c) {
                    self.free.push((r, c));
                }
            }
        }
        self.values = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn current(&self) -> Subspace {
        let pivots = self.pivots.as_ref().expect("active pattern");
        let mut b = Matrix::zeros(self.prime, self.d, self.m);
        for (r, &pc) in pivots.iter().enumerate() {
            b.data[r * self.m + pc] = 1;
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.values) {
            b.data[r * self.m + c] = v;
        }
        Subspace { basis: b }
    }

    fn advance_values(&mut self) -> bool {
        let q = self.prime.value();
        for v in self.values.iter_mut().rev() {
            *v += 1;
            if *v < q {
                return true;
            }
            *v = 0;
        }
        false
    }

    fn advance_pivots(&mut self) {
        let Some(pivots) = self.pivots.as_mut() else {
            return;
        };
        let (d, m) = (self.d, self.m);
        let mut i = d;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if pivots[i] < m - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_free();
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            self.pivots.as_ref()?;
            if self.fresh {
                self.fresh = false;
                return Some(self.current());
            }
            if self.advance_values() {
                return Some(self.current());
            }
            self.advance_pivots();
        }
    }
}
