//! The symplectic space (V, Ω) with Ω in standard block form, orthogonality,
//! non-degeneracy and the groups Sp(Ω) ⊆ GSp(Ω).

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::field::{Prime, Scalar};
use crate::linalg::{Matrix, Subspace};

/// Seeded generator used for every sampled construction.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// V = GF(p)^{2n} with Ω(x, y) = xᵀ·G·y, where G pairs coordinates
/// (2i, 2i+1): G[2i][2i+1] = 1, G[2i+1][2i] = −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    n: usize,
    prime: Prime,
    gram: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Hyperbolic,
    Isotropic,
}

/// Result of testing `Mᵀ·G·M` against multiples of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Symplectic,
    Similitude(Scalar),
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupKind {
    Symplectic,
    Similitude { lambda: u32 },
}

/// An element of GSp(Ω); `kind` records its multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    matrix: Matrix,
    #[serde(flatten)]
    kind: GroupKind,
}

impl SymplecticSpace {
    pub fn new(prime: Prime, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "symplectic rank n must be at least 1".into(),
            ));
        }
        let mut gram = Matrix::zeros(prime, 2 * n, 2 * n);
        for i in 0..n {
            gram.set(2 * i, 2 * i + 1, 1);
            gram.set(2 * i + 1, 2 * i, prime.neg(1));
        }
        Ok(SymplecticSpace { n, prime, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.prime, self.dim())
    }

    pub fn zero(&self) -> Subspace {
        Subspace::zero(self.prime, self.dim())
    }

    pub fn unit(&self, i: usize) -> Vec<u32> {
        Subspace::unit(self.dim(), i)
    }

    pub fn span<R: AsRef<[u32]>>(&self, vectors: &[R]) -> Result<Subspace> {
        Subspace::span(self.prime, self.dim(), vectors)
    }

    /// Span of standard basis vectors, zero-indexed.
    pub fn coordinate_span(&self, indices: &[usize]) -> Subspace {
        let vs: Vec<Vec<u32>> = indices.iter().map(|&i| self.unit(i)).collect();
        self.span(&vs).expect("unit vectors have ambient length")
    }

    fn check_vec(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.prime() != self.prime {
            return Err(Error::ModulusMismatch {
                left: self.prime.value(),
                right: s.prime().value(),
            });
        }
        if s.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `G·y`, so that Ω(x, y) = x · (G·y).
    pub(crate) fn form_image(&self, y: &[u32]) -> Vec<u32> {
        let p = self.prime;
        let mut out = vec![0; y.len()];
        for i in 0..self.n {
            out[2 * i] = y[2 * i + 1];
            out[2 * i + 1] = p.neg(y[2 * i]);
        }
        out
    }

    #[inline]
    pub(crate) fn omega_raw(&self, x: &[u32], y: &[u32]) -> u32 {
        let p = self.prime;
        let mut acc = 0u32;
        for i in 0..self.n {
            let a = p.mul(x[2 * i], y[2 * i + 1]);
            let b = p.mul(x[2 * i + 1], y[2 * i]);
            acc = p.add(acc, p.sub(a, b));
        }
        acc
    }

    pub fn omega(&self, x: &[u32], y: &[u32]) -> Result<Scalar> {
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(Scalar::new(self.omega_raw(x, y) as u64, self.prime))
    }

    /// Orthogonal complement with respect to Ω.
    pub fn perp(&self, s: &Subspace) -> Result<Subspace> {
        self.check_subspace(s)?;
        if s.is_zero() {
            return Ok(self.full());
        }
        // x ⊥ s  ⟺  (G·s)·x = 0 up to sign, so perp(S) = ann(G·S).
        let rows: Vec<Vec<u32>> = s.basis_rows().map(|r| self.form_image(r)).collect();
        let m = Matrix::from_rows(self.prime, self.dim(), &rows)?;
        Ok(Subspace::row_space(&m.kernel()))
    }

    /// Gram matrix of Ω restricted to the basis of `s`.
    pub fn restricted_gram(&self, s: &Subspace) -> Result<Matrix> {
        self.check_subspace(s)?;
        let d = s.dim();
        let mut g = Matrix::zeros(self.prime, d, d);
        let rows: Vec<&[u32]> = s.basis_rows().collect();
        for i in 0..d {
            for j in 0..d {
                g.set(i, j, self.omega_raw(rows[i], rows[j]));
            }
        }
        Ok(g)
    }

    pub fn is_nondegenerate(&self, s: &Subspace) -> Result<bool> {
        self.check_subspace(s)?;
        if s.dim() == 2 {
            let b = s.basis();
            return Ok(self.omega_raw(b.row(0), b.row(1)) != 0);
        }
        if s.dim() % 2 == 1 {
            return Ok(false);
        }
        Ok(self.restricted_gram(s)?.rank() == s.dim())
    }

    pub fn line_kind(&self, line: &Subspace) -> Result<LineKind> {
        if line.dim() != 2 {
            return Err(Error::Domain(format!(
                "a projective line is 2-dimensional, got dimension {}",
                line.dim()
            )));
        }
        Ok(if self.is_nondegenerate(line)? {
            LineKind::Hyperbolic
        } else {
            LineKind::Isotropic
        })
    }

    /// True iff Ω vanishes on `a × b`.
    pub fn orthogonal(&self, a: &Subspace, b: &Subspace) -> Result<bool> {
        self.check_subspace(a)?;
        self.check_subspace(b)?;
        Ok(a.basis_rows()
            .all(|x| b.basis_rows().all(|y| self.omega_raw(x, y) == 0)))
    }

    pub fn classify(&self, m: &Matrix) -> Result<Classification> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.rows().max(m.cols()),
            });
        }
        let t = m.transpose().mul(&self.gram)?.mul(m)?;
        let lambda = t.get(0, 1);
        if lambda == 0 || t != self.gram.scale(lambda) {
            return Ok(Classification::Neither);
        }
        Ok(if lambda == 1 {
            Classification::Symplectic
        } else {
            Classification::Similitude(Scalar::new(lambda as u64, self.prime))
        })
    }

    /// Wraps `m` after checking it lies in GSp(Ω).
    pub fn group_element(&self, m: Matrix) -> Result<GroupElement> {
        let kind = match self.classify(&m)? {
            Classification::Symplectic => GroupKind::Symplectic,
            Classification::Similitude(l) => GroupKind::Similitude { lambda: l.value() },
            Classification::Neither => {
                return Err(Error::Domain(
                    "matrix does not preserve Ω up to a scalar".into(),
                ))
            }
        };
        Ok(GroupElement { matrix: m, kind })
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            matrix: Matrix::identity(self.prime, self.dim()),
            kind: GroupKind::Symplectic,
        }
    }

    /// x ↦ x + λ·Ω(x, v)·v.
    pub fn transvection(&self, v: &[u32], lambda: Scalar) -> Result<GroupElement> {
        self.check_vec(v)?;
        if lambda.modulus() != self.prime {
            return Err(Error::ModulusMismatch {
                left: self.prime.value(),
                right: lambda.modulus().value(),
            });
        }
        if v.iter().all(|&x| x % self.prime.value() == 0) {
            return Err(Error::Domain(
                "transvection direction must be nonzero".into(),
            ));
        }
        let p = self.prime;
        let d = self.dim();
        // Ω(x, v) = xᵀ·(G·v), so the map is I + λ·v·(G·v)ᵀ.
        let gv = self.form_image(v);
        let mut m = Matrix::identity(p, d);
        for (r, &vr) in v.iter().enumerate().take(d) {
            let coef = p.mul(lambda.value(), vr % p.value());
            if coef == 0 {
                continue;
            }
            for (c, &g) in gv.iter().enumerate() {
                let cur = m.get(r, c);
                m.set(r, c, p.add(cur, p.mul(coef, g)));
            }
        }
        Ok(GroupElement {
            matrix: m,
            kind: GroupKind::Symplectic,
        })
    }

    /// diag(λ, 1, λ, 1, …), a similitude with multiplier λ.
    pub fn similitude_generator(&self, lambda: u32) -> Result<GroupElement> {
        let lambda = lambda % self.prime.value();
        if lambda == 0 {
            return Err(Error::Domain(
                "similitude multiplier must be nonzero".into(),
            ));
        }
        let diag: Vec<u32> = (0..self.dim())
            .map(|i| if i % 2 == 0 { lambda } else { 1 })
            .collect();
        self.group_element(Matrix::diagonal(self.prime, &diag))
    }

    pub fn sp_order(&self) -> u128 {
        sp_order(self.prime.value() as u64, self.n)
    }

    pub fn gsp_order(&self) -> u128 {
        self.sp_order()
            .saturating_mul(self.prime.value() as u128 - 1)
    }

    /// Every element of Sp(Ω), by breadth-first closure over transvections.
    pub fn enumerate_sp(&self, budget: Budget) -> Result<Vec<GroupElement>> {
        budget.check("enumerating Sp(Ω)", self.sp_order())?;
        let gens = self.transvection_generators()?;
        Ok(bfs_closure(self.identity(), &gens))
    }

    /// Every element of GSp(Ω): Sp(Ω) together with one similitude of
    /// primitive multiplier.
    pub fn enumerate_gsp(&self, budget: Budget) -> Result<Vec<GroupElement>> {
        budget.check("enumerating GSp(Ω)", self.gsp_order())?;
        let mut gens = self.transvection_generators()?;
        if self.prime.value() > 2 {
            gens.push(self.similitude_generator(self.prime.primitive_root())?);
        }
        Ok(bfs_closure(self.identity(), &gens))
    }

    fn transvection_generators(&self) -> Result<Vec<GroupElement>> {
        let q = self.prime.value() as u64;
        let total = q.pow(self.dim() as u32);
        let one = Scalar::one(self.prime);
        let mut gens = Vec::new();
        for x in 1..total {
            let v = digits(x, q, self.dim());
            // One direction per projective point.
            let lead = v.iter().find(|&&c| c != 0).copied().unwrap_or(0);
            if lead != 1 {
                continue;
            }
            gens.push(self.transvection(&v, one)?);
        }
        Ok(gens)
    }

    /// Uniform-ish random nonzero vector of `s`.
    pub(crate) fn random_vector_in(&self, s: &Subspace, rng: &mut SeededRng) -> Vec<u32> {
        let q = self.prime.value();
        loop {
            let coeffs: Vec<u32> = (0..s.dim()).map(|_| rng.gen_range(0..q)).collect();
            if coeffs.iter().any(|&c| c != 0) {
                return s.combination(&coeffs);
            }
        }
    }

    /// A random `w ∈ s` with Ω(v, w) = 1; `s` must contain such a vector.
    pub(crate) fn random_partner_in(
        &self,
        v: &[u32],
        s: &Subspace,
        rng: &mut SeededRng,
    ) -> Vec<u32> {
        let p = self.prime;
        loop {
            let w = self.random_vector_in(s, rng);
            let o = self.omega_raw(v, &w);
            if let Some(inv) = p.inv(o) {
                return w.into_iter().map(|x| p.mul(x, inv)).collect();
            }
        }
    }

    /// Random symplectic basis of a non-degenerate subspace as hyperbolic
    /// pairs (v, w) with Ω(v, w) = 1, pairwise orthogonal.
    pub(crate) fn random_hyperbolic_pairs(
        &self,
        within: &Subspace,
        rng: &mut SeededRng,
    ) -> Result<Vec<(Vec<u32>, Vec<u32>)>> {
        let mut residual = within.clone();
        let mut pairs = Vec::new();
        while !residual.is_zero() {
            let v = self.random_vector_in(&residual, rng);
            let w = self.random_partner_in(&v, &residual, rng);
            let plane = self.span(&[&v, &w])?;
            residual = residual.intersect(&self.perp(&plane)?)?;
            pairs.push((v, w));
        }
        Ok(pairs)
    }

    /// A seeded element of Sp(Ω): the change of basis from the standard
    /// symplectic basis to a random one.
    pub fn random_sp(&self, seed: u64) -> GroupElement {
        let mut rng = seeded_rng(seed);
        self.random_sp_with(&mut rng)
    }

    pub(crate) fn random_sp_with(&self, rng: &mut SeededRng) -> GroupElement {
        let pairs = self
            .random_hyperbolic_pairs(&self.full(), rng)
            .expect("V is non-degenerate");
        let cols: Vec<&Vec<u32>> = pairs.iter().flat_map(|(v, w)| [v, w]).collect();
        let m =
            Matrix::from_columns(self.prime, self.dim(), &cols).expect("2n columns of length 2n");
        GroupElement {
            matrix: m,
            kind: GroupKind::Symplectic,
        }
    }
}

fn digits(mut x: u64, q: u64, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for slot in v.iter_mut().rev() {
        *slot = (x % q) as u32;
        x /= q;
    }
    v
}

fn bfs_closure(identity: GroupElement, gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut seen: HashSet<Matrix> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.matrix.clone());
    queue.push_back(identity);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s).expect("same space");
            if seen.insert(h.matrix.clone()) {
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    out
}

/// |Sp(2n, q)| = q^{n²} · ∏_{i=1..n} (q^{2i} − 1), saturating.
pub fn sp_order(q: u64, n: usize) -> u128 {
    let q = q as u128;
    let mut acc = q.saturating_pow((n * n) as u32);
    for i in 1..=n {
        acc = acc.saturating_mul(q.saturating_pow(2 * i as u32) - 1);
    }
    acc
}

impl GroupElement {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn multiplier(&self) -> u32 {
        match self.kind {
            GroupKind::Symplectic => 1,
            GroupKind::Similitude { lambda } => lambda,
        }
    }

    pub fn is_symplectic(&self) -> bool {
        self.kind == GroupKind::Symplectic
    }

    fn kind_for(p: Prime, lambda: u32) -> GroupKind {
        if lambda % p.value() == 1 {
            GroupKind::Symplectic
        } else {
            GroupKind::Similitude { lambda }
        }
    }

    /// `self ∘ other`, i.e. the matrix product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let p = self.matrix.prime();
        let m = self.matrix.mul(&other.matrix)?;
        let lambda = p.mul(self.multiplier(), other.multiplier());
        Ok(GroupElement {
            matrix: m,
            kind: Self::kind_for(p, lambda),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let p = self.matrix.prime();
        let m = self
            .matrix
            .inverse()
            .expect("group elements are invertible");
        let lambda = p.inv(self.multiplier()).expect("multiplier is nonzero");
        GroupElement {
            matrix: m,
            kind: Self::kind_for(p, lambda),
        }
    }

    pub fn apply(&self, s: &Subspace) -> Result<Subspace> {
        s.image(&self.matrix)
    }

    pub fn apply_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.matrix.mul_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::enumerate_subspaces;

    fn space(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(Prime::new(p).unwrap(), n).unwrap()
    }

    #[test]
    fn omega_examples() {
        let s = space(2, 2);
        assert_eq!(s.omega(&s.unit(0), &s.unit(1)).unwrap().value(), 1);
        let s3 = space(3, 2);
        assert_eq!(s3.omega(&s3.unit(1), &s3.unit(0)).unwrap().value(), 2);
        let mut rng = seeded_rng(1);
        for _ in 0..20 {
            let x = s3.random_vector_in(&s3.full(), &mut rng);
            assert_eq!(s3.omega(&x, &x).unwrap().value(), 0);
        }
        assert!(s.omega(&[1, 0], &s.unit(0)).is_err());
    }

    #[test]
    fn perp_examples() {
        let s = space(2, 2);
        let a = s.coordinate_span(&[0, 1]);
        assert_eq!(s.perp(&a).unwrap(), s.coordinate_span(&[2, 3]));
        assert_eq!(s.perp(&s.zero()).unwrap(), s.full());
        let p = Prime::new(2).unwrap();
        for u in enumerate_subspaces(p, 4, 2, Budget::DEFAULT).unwrap() {
            assert_eq!(s.perp(&s.perp(&u).unwrap()).unwrap(), u);
        }
    }

    #[test]
    fn nondegenerate_and_line_kinds() {
        let s = space(2, 2);
        assert!(s.is_nondegenerate(&s.coordinate_span(&[0, 1])).unwrap());
        assert!(!s.is_nondegenerate(&s.coordinate_span(&[0, 2])).unwrap());
        assert_eq!(
            s.line_kind(&s.coordinate_span(&[0, 1])).unwrap(),
            LineKind::Hyperbolic
        );
        assert_eq!(
            s.line_kind(&s.coordinate_span(&[0, 2])).unwrap(),
            LineKind::Isotropic
        );
        assert!(s.line_kind(&s.coordinate_span(&[0])).is_err());
        let p = Prime::new(2).unwrap();
        let nondeg = enumerate_subspaces(p, 4, 2, Budget::DEFAULT)
            .unwrap()
            .filter(|u| s.is_nondegenerate(u).unwrap())
            .count();
        assert_eq!(nondeg, 20);
    }

    #[test]
    fn line_counts_in_dimension_six() {
        let s = space(2, 3);
        let p = Prime::new(2).unwrap();
        let (mut hyp, mut iso) = (0, 0);
        for l in enumerate_subspaces(p, 6, 2, Budget::DEFAULT).unwrap() {
            match s.line_kind(&l).unwrap() {
                LineKind::Hyperbolic => hyp += 1,
                LineKind::Isotropic => iso += 1,
            }
        }
        assert_eq!((hyp, iso), (336, 315));
    }

    /// Exhaustive at 2n ≤ 6 for p ∈ {2, 3} (p = 3 only at 2n = 4).
    #[test]
    fn perp_is_an_inclusion_reversing_involution() {
        for (q, n) in [(2u32, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let s = space(q, n);
            let p = s.prime();
            let subs: Vec<Subspace> = (0..=2 * n)
                .flat_map(|d| enumerate_subspaces(p, 2 * n, d, Budget::DEFAULT).unwrap())
                .collect();
            let perps: Vec<Subspace> = subs.iter().map(|u| s.perp(u).unwrap()).collect();
            for (u, pu) in subs.iter().zip(&perps) {
                assert_eq!(pu.dim(), 2 * n - u.dim());
                assert_eq!(&s.perp(pu).unwrap(), u);
                if s.is_nondegenerate(u).unwrap() {
                    assert_eq!(u.dim() % 2, 0);
                    assert!(u.sum(pu).unwrap().is_full());
                    assert!(u.intersect(pu).unwrap().is_zero());
                }
            }
            if n <= 2 {
                for (a, pa) in subs.iter().zip(&perps) {
                    for (b, pb) in subs.iter().zip(&perps) {
                        if b.contains(a).unwrap() {
                            assert!(pa.contains(pb).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classification() {
        let s = space(3, 2);
        let p = s.prime();
        assert_eq!(
            s.classify(&Matrix::identity(p, 4)).unwrap(),
            Classification::Symplectic
        );
        // 2·I has multiplier 4 ≡ 1 mod 3.
        assert_eq!(
            s.classify(&Matrix::diagonal(p, &[2, 2, 2, 2])).unwrap(),
            Classification::Symplectic
        );
        let t = s.transvection(&s.unit(0), Scalar::one(p)).unwrap();
        let lhs = t
            .matrix()
            .transpose()
            .mul(s.gram())
            .unwrap()
            .mul(t.matrix())
            .unwrap();
        assert_eq!(&lhs, s.gram());
        assert_eq!(s.classify(t.matrix()).unwrap(), Classification::Symplectic);
        let sim = s.similitude_generator(2).unwrap();
        assert_eq!(
            s.classify(sim.matrix()).unwrap(),
            Classification::Similitude(Scalar::new(2, p))
        );
        assert_eq!(
            s.classify(&Matrix::diagonal(p, &[1, 1, 1, 2])).unwrap(),
            Classification::Neither
        );
    }

    #[test]
    fn transvections() {
        let s = space(3, 2);
        let p = s.prime();
        let v = s.unit(1);
        let id = s.transvection(&v, Scalar::zero(p)).unwrap();
        assert!(id.matrix().is_identity());
        let mut rng = seeded_rng(7);
        for _ in 0..10 {
            let v = s.random_vector_in(&s.full(), &mut rng);
            let (l, m) = (rng.gen_range(0..3u64), rng.gen_range(0..3u64));
            let a = s.transvection(&v, Scalar::new(l, p)).unwrap();
            let b = s.transvection(&v, Scalar::new(m, p)).unwrap();
            let c = s.transvection(&v, Scalar::new(l + m, p)).unwrap();
            assert_eq!(a.compose(&b).unwrap(), c);
        }
        assert!(s.transvection(&[0, 0, 0, 0], Scalar::one(p)).is_err());
    }

    #[test]
    fn sp_4_2_enumeration() {
        let s = space(2, 2);
        assert_eq!(s.sp_order(), 720);
        let g = s.enumerate_sp(Budget::DEFAULT).unwrap();
        assert_eq!(g.len(), 720);
        assert_eq!(g.iter().filter(|e| e.matrix().is_identity()).count(), 1);
        for e in &g {
            assert_eq!(s.classify(e.matrix()).unwrap(), Classification::Symplectic);
        }
        assert!(s.enumerate_sp(Budget::new(719)).unwrap_err().is_budget());
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(space(3, 1).enumerate_sp(Budget::DEFAULT).unwrap().len(), 24);
        assert_eq!(
            space(3, 1).enumerate_gsp(Budget::DEFAULT).unwrap().len(),
            48
        );
        assert_eq!(
            space(5, 1).enumerate_sp(Budget::DEFAULT).unwrap().len(),
            120
        );
        assert_eq!(sp_order(2, 3), 1_451_520);
        assert_eq!(sp_order(3, 2), 51_840);
    }

    #[test]
    fn random_elements_are_symplectic_and_deterministic() {
        let s = space(3, 3);
        for seed in 0..100 {
            let g = s.random_sp(seed);
            assert_eq!(s.classify(g.matrix()).unwrap(), Classification::Symplectic);
        }
        assert_eq!(s.random_sp(42), s.random_sp(42));
        assert_ne!(s.random_sp(42), s.random_sp(43));
    }

    #[test]
    fn group_elements_preserve_nondegeneracy_and_perp() {
        let s = space(3, 2);
        let p = s.prime();
        let lines: Vec<Subspace> = enumerate_subspaces(p, 4, 2, Budget::DEFAULT)
            .unwrap()
            .collect();
        for seed in 0..5 {
            let g = s
                .random_sp(seed)
                .compose(&s.similitude_generator(2).unwrap())
                .unwrap();
            for u in &lines {
                let gu = g.apply(u).unwrap();
                assert_eq!(
                    s.is_nondegenerate(&gu).unwrap(),
                    s.is_nondegenerate(u).unwrap()
                );
                assert_eq!(g.apply(&s.perp(u).unwrap()).unwrap(), s.perp(&gu).unwrap());
            }
        }
    }

    #[test]
    fn inverse_and_multipliers() {
        let s = space(5, 2);
        let g = s
            .random_sp(3)
            .compose(&s.similitude_generator(2).unwrap())
            .unwrap();
        assert_eq!(g.kind(), GroupKind::Similitude { lambda: 2 });
        let inv = g.inverse();
        assert_eq!(inv.kind(), GroupKind::Similitude { lambda: 3 });
        assert!(g.compose(&inv).unwrap().matrix().is_identity());
    }
}
