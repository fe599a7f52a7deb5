//! Matrix factorisations, graded maps, tensor products with Koszul signs, duals and Hom.
//!
//! A factorisation of rank `(r0, r1)` is stored through its full odd differential
//! `d = [[0, d1], [d0, 0]]` on the basis "even part first, then odd part".

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Field, QMat};
use crate::pmat::PMat;
use crate::poly::{mono_degree, same_ring, Mono, Poly, RingRef, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorisation {
    ring: RingRef,
    w: Poly,
    r0: usize,
    r1: usize,
    d: PMat,
}

pub type MF = MatrixFactorisation;

impl MatrixFactorisation {
    /// Validated factorisation from its blocks `d0: X⁰→X¹` and `d1: X¹→X⁰`.
    pub fn new(w: &Poly, d0: &PMat, d1: &PMat) -> Result<MF> {
        let r0 = d0.cols();
        let r1 = d0.rows();
        if d1.rows() != r0 || d1.cols() != r1 {
            return Err(Error::ShapeMismatch(format!(
                "d0 is {}x{} but d1 is {}x{}",
                d0.rows(),
                d0.cols(),
                d1.rows(),
                d1.cols()
            )));
        }
        for m in [d0, d1] {
            if m.rows() * m.cols() > 0 && !same_ring(m.ring(), w.ring()) {
                return Err(Error::ContextMismatch("differential and potential".into()));
            }
        }
        let ring = w.ring().clone();
        let mut d = PMat::zeros(&ring, r0 + r1, r0 + r1);
        d.put(r0, 0, d0);
        d.put(0, r0, d1);
        let x = MF {
            ring,
            w: w.clone(),
            r0,
            r1,
            d,
        };
        x.check()?;
        Ok(x)
    }

    /// Validated factorisation from the full odd differential.
    pub fn from_full(w: &Poly, r0: usize, r1: usize, d: PMat) -> Result<MF> {
        let x = MF::from_full_unchecked(w, r0, r1, d)?;
        x.check()?;
        Ok(x)
    }

    pub fn from_full_unchecked(w: &Poly, r0: usize, r1: usize, d: PMat) -> Result<MF> {
        if d.rows() != r0 + r1 || d.cols() != r0 + r1 {
            return Err(Error::ShapeMismatch("differential size".into()));
        }
        for i in 0..r0 + r1 {
            for j in 0..r0 + r1 {
                if (i < r0) == (j < r0) && !d.get(i, j).is_zero() {
                    return Err(Error::ShapeMismatch(format!(
                        "differential entry ({i},{j}) preserves parity"
                    )));
                }
            }
        }
        Ok(MF {
            ring: w.ring().clone(),
            w: w.clone(),
            r0,
            r1,
            d,
        })
    }

    /// Verify `d∘d = W·1`; report the first offending entry.
    pub fn check(&self) -> Result<()> {
        let dd = self.d.mul(&self.d);
        let n = self.rank();
        for i in 0..n {
            for j in 0..n {
                let e = if i == j {
                    dd.get(i, j) - &self.w
                } else {
                    dd.get(i, j).clone()
                };
                if !e.is_zero() {
                    let (block, r, c) = if i < self.r0 {
                        ("d1*d0", i, j)
                    } else {
                        ("d0*d1", i - self.r0, j - self.r0)
                    };
                    return Err(Error::NotAFactorisation {
                        block: block.into(),
                        row: r,
                        col: c,
                        entry: e.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The unit factorisation of zero, rank (1, 0).
    pub fn unit(ring: &RingRef) -> MF {
        MF {
            ring: ring.clone(),
            w: Poly::zero(ring),
            r0: 1,
            r1: 0,
            d: PMat::zeros(ring, 1, 1),
        }
    }

    /// The zero factorisation of `w`, rank (0, 0).
    pub fn zero(w: &Poly) -> MF {
        MF {
            ring: w.ring().clone(),
            w: w.clone(),
            r0: 0,
            r1: 0,
            d: PMat::zeros(w.ring(), 0, 0),
        }
    }

    /// Rank-(1,1) factorisation `(a | b)` of `a·b` with `d0 = a`, `d1 = b`.
    pub fn rank_one(a: &Poly, b: &Poly) -> Result<MF> {
        let r = a.ring();
        MF::new(
            &a.multiply(b)?,
            &PMat::from_rows(r, vec![vec![a.clone()]]),
            &PMat::from_rows(r, vec![vec![b.clone()]]),
        )
    }

    /// Tensor product of the rank-(1,1) factorisations `(a_i | b_i)` in order.
    pub fn koszul(ring: &RingRef, pairs: &[(Poly, Poly)]) -> Result<MF> {
        let mut x = MF::unit(ring);
        for (a, b) in pairs {
            x = x.tensor(&MF::rank_one(a, b)?)?;
        }
        Ok(x)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn potential(&self) -> &Poly {
        &self.w
    }

    pub fn r0(&self) -> usize {
        self.r0
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn rank(&self) -> usize {
        self.r0 + self.r1
    }

    /// Parity of basis element `i` (false = even).
    pub fn odd(&self, i: usize) -> bool {
        i >= self.r0
    }

    pub fn parities(&self) -> Vec<bool> {
        (0..self.rank()).map(|i| self.odd(i)).collect()
    }

    pub fn d(&self) -> &PMat {
        &self.d
    }

    pub fn d0(&self) -> PMat {
        let ev: Vec<usize> = (0..self.r0).collect();
        let od: Vec<usize> = (self.r0..self.rank()).collect();
        self.d.select(&od, &ev)
    }

    pub fn d1(&self) -> PMat {
        let ev: Vec<usize> = (0..self.r0).collect();
        let od: Vec<usize> = (self.r0..self.rank()).collect();
        self.d.select(&ev, &od)
    }

    /// Suspension: gradings swapped and the differential negated.
    pub fn shift(&self) -> MF {
        let perm: Vec<usize> = (self.r0..self.rank()).chain(0..self.r0).collect();
        MF {
            ring: self.ring.clone(),
            w: self.w.clone(),
            r0: self.r1,
            r1: self.r0,
            d: self.d.select(&perm, &perm).neg(),
        }
    }

    /// Dual factorisation of `-W`: new `d1 = d0ᵀ`, new `d0 = -d1ᵀ`.
    pub fn dual(&self) -> MF {
        let mut d = PMat::zeros(&self.ring, self.rank(), self.rank());
        d.put(0, self.r0, &self.d0().transpose());
        d.put(self.r0, 0, &self.d1().transpose().neg());
        MF {
            ring: self.ring.clone(),
            w: -&self.w,
            r0: self.r0,
            r1: self.r1,
            d,
        }
    }

    /// Tensor product, potential `W + V`, with basis order from [`TensorBasis`].
    pub fn tensor(&self, other: &MF) -> Result<MF> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::ContextMismatch("tensor of factorisations over different rings".into()));
        }
        let tb = TensorBasis::new(&self.parities(), &other.parities());
        let ix = PMat::identity(&self.ring, self.rank());
        let iy = PMat::identity(&self.ring, other.rank());
        let px = self.parities();
        let d = tensor_maps_between(&tb, &tb, &self.d, &iy, false, &px)
            .add(&tensor_maps_between(&tb, &tb, &ix, &other.d, true, &px));
        MF::from_full(&(&self.w + &other.w), tb.r0, tb.rank() - tb.r0, d)
    }

    pub fn direct_sum(&self, other: &MF) -> Result<MF> {
        if self.w != other.w {
            return Err(Error::ContextMismatch("direct sum of different potentials".into()));
        }
        let perm = sum_perm(self.r0, self.r1, other.r0, other.r1);
        let n = self.rank() + other.rank();
        let mut blk = PMat::zeros(&self.ring, n, n);
        blk.put(0, 0, &self.d);
        blk.put(self.rank(), self.rank(), &other.d);
        MF::from_full(&self.w, self.r0 + other.r0, self.r1 + other.r1, blk.select(&perm, &perm))
    }

    /// `Hom(X, Y)` presented as `X^∨ ⊗ Y`; a factorisation of `W_Y − W_X`.
    pub fn hom(&self, y: &MF) -> Result<MF> {
        self.dual().tensor(y)
    }

    pub fn identity(&self) -> MFMap {
        MFMap::new_unchecked(self, self, false, PMat::identity(&self.ring, self.rank()))
    }

    pub fn d_map(&self) -> MFMap {
        MFMap::new_unchecked(self, self, true, self.d.clone())
    }

    /// `λ_v = ∂_v(d)`, an odd homotopy for `∂_v W · 1`.
    pub fn partial_homotopy(&self, var: usize) -> Result<MFMap> {
        let l = MFMap::new_unchecked(self, self, true, self.d.partial(var));
        let lhs = l.m.mul(&self.d).add(&self.d.mul(&l.m));
        let rhs = PMat::scalar(&self.w.partial(var), self.rank());
        if lhs != rhs {
            return Err(Error::HomotopyIdentityFailed(format!(
                "∂_{} d is not a homotopy for ∂W",
                self.ring.vars()[var]
            )));
        }
        Ok(l)
    }

    pub fn partial_homotopy_named(&self, var: &str) -> Result<MFMap> {
        let i = self
            .ring
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable(var.into()))?;
        self.partial_homotopy(i)
    }

    /// Re-express in another ring with the same variable names available.
    pub fn to_ring(&self, ring: &RingRef) -> Result<MF> {
        Ok(MF {
            ring: ring.clone(),
            w: self.w.to_ring(ring)?,
            r0: self.r0,
            r1: self.r1,
            d: self.d.to_ring(ring)?,
        })
    }

    /// Apply a map to every entry and to the potential, then validate.
    pub fn map_entries(&self, ring: &RingRef, f: impl Fn(&Poly) -> Result<Poly>) -> Result<MF> {
        let w = f(&self.w)?;
        let d = self.d.try_map(ring, &f)?;
        MF::from_full(&w, self.r0, self.r1, d)
    }

    pub fn is_contractible_shape(&self) -> bool {
        self.rank() == 0
    }
}

/// Permutation taking `X ⊕ Y` (X block then Y block) to even-first order.
fn sum_perm(a0: usize, a1: usize, b0: usize, b1: usize) -> Vec<usize> {
    let a = a0 + a1;
    (0..a0)
        .chain(a..a + b0)
        .chain(a0..a)
        .chain(a + b0..a + b0 + b1)
        .collect()
}

/// Ordering of the basis `x_i ⊗ y_j` of a tensor product: even total parity first,
/// lexicographic in `(i, j)` within each half.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    pub pairs: Vec<(usize, usize)>,
    pub index: BTreeMap<(usize, usize), usize>,
    pub r0: usize,
    pub nx: usize,
    pub ny: usize,
}

impl TensorBasis {
    pub fn new(px: &[bool], py: &[bool]) -> TensorBasis {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (i, &a) in px.iter().enumerate() {
            for (j, &b) in py.iter().enumerate() {
                if a ^ b {
                    odd.push((i, j));
                } else {
                    even.push((i, j));
                }
            }
        }
        let r0 = even.len();
        even.extend(odd);
        let index = even.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        TensorBasis {
            pairs: even,
            index,
            r0,
            nx: px.len(),
            ny: py.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn pos(&self, i: usize, j: usize) -> usize {
        self.index[&(i, j)]
    }
}

/// `f ⊗ g` between two tensor bases with the Koszul sign.
pub fn tensor_maps_between(
    src: &TensorBasis,
    dst: &TensorBasis,
    f: &PMat,
    g: &PMat,
    g_odd: bool,
    px: &[bool],
) -> PMat {
    let ring = f.ring().clone();
    let mut m = PMat::zeros(&ring, dst.rank(), src.rank());
    for (c, &(i, j)) in src.pairs.iter().enumerate() {
        let s = g_odd && px[i];
        for i2 in 0..dst.nx {
            let a = f.get(i2, i);
            if a.is_zero() {
                continue;
            }
            for j2 in 0..dst.ny {
                let b = g.get(j2, j);
                if b.is_zero() {
                    continue;
                }
                let v = a * b;
                let v = if s { -&v } else { v };
                m.set(dst.pos(i2, j2), c, v);
            }
        }
    }
    m
}

/// A homogeneous map of factorisations, stored as a full matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFMap {
    pub source: Arc<MF>,
    pub target: Arc<MF>,
    pub odd: bool,
    pub m: PMat,
}

impl MFMap {
    pub fn new(source: &MF, target: &MF, odd: bool, m: PMat) -> Result<MFMap> {
        if m.rows() != target.rank() || m.cols() != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "map is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                target.rank(),
                source.rank()
            )));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if (target.odd(i) ^ source.odd(j)) != odd && !m.get(i, j).is_zero() {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({i},{j}) has the wrong parity"
                    )));
                }
            }
        }
        Ok(MFMap::new_unchecked(source, target, odd, m))
    }

    pub fn new_unchecked(source: &MF, target: &MF, odd: bool, m: PMat) -> MFMap {
        MFMap {
            source: Arc::new(source.clone()),
            target: Arc::new(target.clone()),
            odd,
            m,
        }
    }

    fn with_matrix(&self, m: PMat) -> MFMap {
        MFMap {
            source: self.source.clone(),
            target: self.target.clone(),
            odd: self.odd,
            m,
        }
    }

    pub fn zero(source: &MF, target: &MF, odd: bool) -> MFMap {
        MFMap::new_unchecked(source, target, odd, PMat::zeros(source.ring(), target.rank(), source.rank()))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MFMap) -> Result<MFMap> {
        if other.target.rank() != self.source.rank() {
            return Err(Error::ShapeMismatch("composition of incompatible maps".into()));
        }
        Ok(MFMap {
            source: other.source.clone(),
            target: self.target.clone(),
            odd: self.odd ^ other.odd,
            m: self.m.try_mul(&other.m)?,
        })
    }

    pub fn add(&self, o: &MFMap) -> Result<MFMap> {
        if self.odd != o.odd || self.m.rows() != o.m.rows() || self.m.cols() != o.m.cols() {
            return Err(Error::ShapeMismatch("sum of incompatible maps".into()));
        }
        Ok(self.with_matrix(self.m.add(&o.m)))
    }

    pub fn sub(&self, o: &MFMap) -> Result<MFMap> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MFMap {
        self.with_matrix(self.m.neg())
    }

    pub fn scale(&self, c: &Q) -> MFMap {
        self.with_matrix(self.m.scale(c))
    }

    pub fn scale_poly(&self, p: &Poly) -> MFMap {
        self.with_matrix(self.m.scale_poly(p))
    }

    /// Hom differential `d_Y f − (−1)^{|f|} f d_X`.
    pub fn differential(&self) -> PMat {
        let a = self.target.d().mul(&self.m);
        let b = self.m.mul(self.source.d());
        if self.odd {
            a.add(&b)
        } else {
            a.sub(&b)
        }
    }

    pub fn is_morphism(&self) -> bool {
        self.differential().is_zero()
    }

    /// `tr(f|even) − tr(f|odd)` of an even endomorphism.
    pub fn supertrace(&self) -> Result<Poly> {
        if self.odd {
            return Err(Error::ShapeMismatch("supertrace of an odd map".into()));
        }
        if self.m.rows() != self.m.cols() {
            return Err(Error::ShapeMismatch("supertrace of a non-endomorphism".into()));
        }
        Ok(supertrace(&self.m, self.source.r0()))
    }

    /// Even block `X⁰ → Y^{|f|}`.
    pub fn f0(&self) -> PMat {
        let rows = self.block_rows(self.odd);
        let cols: Vec<usize> = (0..self.source.r0()).collect();
        self.m.select(&rows, &cols)
    }

    /// Odd block `X¹ → Y^{1+|f|}`.
    pub fn f1(&self) -> PMat {
        let rows = self.block_rows(!self.odd);
        let cols: Vec<usize> = (self.source.r0()..self.source.rank()).collect();
        self.m.select(&rows, &cols)
    }

    fn block_rows(&self, odd: bool) -> Vec<usize> {
        if odd {
            (self.target.r0()..self.target.rank()).collect()
        } else {
            (0..self.target.r0()).collect()
        }
    }

    /// `f ⊗ g` on tensor products, with the Koszul sign.
    pub fn tensor(&self, g: &MFMap) -> Result<MFMap> {
        let src = self.source.tensor(&g.source)?;
        let dst = self.target.tensor(&g.target)?;
        let sb = TensorBasis::new(&self.source.parities(), &g.source.parities());
        let db = TensorBasis::new(&self.target.parities(), &g.target.parities());
        let m = tensor_maps_between(&sb, &db, &self.m, &g.m, g.odd, &self.source.parities());
        Ok(MFMap::new_unchecked(&src, &dst, self.odd ^ g.odd, m))
    }

    /// `α^∨(φ) = (−1)^{|α||φ|} φ∘α`.
    pub fn dual(&self) -> MFMap {
        let mut m = self.m.transpose();
        if self.odd {
            for j in 0..m.cols() {
                if self.target.odd(j) {
                    for i in 0..m.rows() {
                        let v = -m.get(i, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        MFMap::new_unchecked(&self.target.dual(), &self.source.dual(), self.odd, m)
    }
}

/// Supertrace of a square matrix whose first `r0` basis vectors are even.
pub fn supertrace(m: &PMat, r0: usize) -> Poly {
    let mut t = Poly::zero(m.ring());
    for i in 0..m.rows() {
        if i < r0 {
            t = &t + m.get(i, i);
        } else {
            t = &t - m.get(i, i);
        }
    }
    t
}

/// Supertrace of a constant matrix.
pub fn supertrace_q(m: &QMat, r0: usize) -> Q {
    let mut t = Q::zero();
    for i in 0..m.rows() {
        if i < r0 {
            t += m.get(i, i);
        } else {
            t -= m.get(i, i);
        }
    }
    t
}

/// The map `X → Y` represented by an element of `Hom(X,Y) = X^∨ ⊗ Y`:
/// `ι(ξ_i^* ⊗ η_j)(x) = (−1)^{|i||j|} ξ_i^*(x) η_j`.
pub fn hom_element_to_map(x: &MF, y: &MF, v: &[Poly]) -> PMat {
    let tb = TensorBasis::new(&x.parities(), &y.parities());
    let mut m = PMat::zeros(x.ring(), y.rank(), x.rank());
    for (k, &(i, j)) in tb.pairs.iter().enumerate() {
        if v[k].is_zero() {
            continue;
        }
        let e = if x.odd(i) && y.odd(j) { -&v[k] } else { v[k].clone() };
        m.set(j, i, e);
    }
    m
}

/// Inverse of [`hom_element_to_map`].
pub fn map_to_hom_element(x: &MF, y: &MF, m: &PMat) -> Vec<Poly> {
    let tb = TensorBasis::new(&x.parities(), &y.parities());
    tb.pairs
        .iter()
        .map(|&(i, j)| {
            let e = m.get(j, i).clone();
            if x.odd(i) && y.odd(j) {
                -&e
            } else {
                e
            }
        })
        .collect()
}

/// All monomials of total degree ≤ `k` in `n` variables, ascending by degree then lex.
pub fn monomials_up_to(n: usize, k: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for deg in 0..=k {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Mono>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i == cur.len() - 1 {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(out, cur, i + 1, left - e);
    }
    cur[i] = 0;
}

/// Outcome of a bounded null-homotopy search.
#[derive(Clone, Debug)]
pub enum HomotopySearch {
    Found(MFMap),
    Inconclusive,
}

impl HomotopySearch {
    pub fn witness(&self) -> Option<&MFMap> {
        match self {
            HomotopySearch::Found(h) => Some(h),
            HomotopySearch::Inconclusive => None,
        }
    }
}

/// Default degree bound for homotopy searches: `2·deg W·max rank`.
pub fn default_degree_bound(x: &MF) -> u32 {
    let dw = x.potential().total_degree().unwrap_or(1).max(1);
    2 * dw * (x.r0().max(x.r1()).max(1) as u32)
}

/// Search for `h` with `f = d_Y h − (−1)^{|h|} h d_X`, entries of degree ≤ `bound`.
pub fn find_homotopy(f: &MFMap, bound: u32) -> Result<HomotopySearch> {
    if !f.is_morphism() {
        return Err(Error::NotAMorphism("map does not commute with the differentials".into()));
    }
    if f.is_zero() {
        return Ok(HomotopySearch::Found(MFMap::zero(&f.source, &f.target, !f.odd)));
    }
    let x = &f.source;
    let y = &f.target;
    let ring = x.ring().clone();
    let field = Field::new(ring.characteristic());
    let h_odd = !f.odd;
    let monos = monomials_up_to(ring.nvars(), bound);
    // unknown positions
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for i in 0..y.rank() {
        for j in 0..x.rank() {
            if (y.odd(i) ^ x.odd(j)) == h_odd {
                slots.push((i, j));
            }
        }
    }
    let nunk = slots.len() * monos.len();
    // equations indexed by (row, col, monomial)
    let mut eq_index: BTreeMap<(usize, usize, Mono), usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, Q)>> = Vec::new();
    let mut add = |r: usize, c: usize, m: Mono, unk: usize, v: Q, entries: &mut Vec<Vec<(usize, Q)>>| {
        let n = eq_index.len();
        let e = *eq_index.entry((r, c, m)).or_insert(n);
        if e == entries.len() {
            entries.push(Vec::new());
        }
        entries[e].push((unk, v));
    };
    // h_sign: the term −(−1)^{|h|} h d_X
    let hs = if h_odd { Q::one() } else { -Q::one() };
    for (s, &(i, j)) in slots.iter().enumerate() {
        for (mi, mono) in monos.iter().enumerate() {
            let unk = s * monos.len() + mi;
            // d_Y h: row r, col j gets d_Y[r][i] * mono
            for r in 0..y.rank() {
                for (dm, dc) in y.d().get(r, i).raw_terms() {
                    let mm: Mono = dm.iter().zip(mono).map(|(a, b)| a + b).collect();
                    add(r, j, mm, unk, dc.clone(), &mut entries);
                }
            }
            // h d_X: row i, col c gets mono * d_X[j][c]
            for c in 0..x.rank() {
                for (dm, dc) in x.d().get(j, c).raw_terms() {
                    let mm: Mono = dm.iter().zip(mono).map(|(a, b)| a + b).collect();
                    add(i, c, mm, unk, &hs * dc, &mut entries);
                }
            }
        }
    }
    // right-hand side: f's coefficients; any monomial outside the equation set is infeasible
    let mut rhs = vec![Q::zero(); entries.len()];
    for r in 0..y.rank() {
        for c in 0..x.rank() {
            for (m, v) in f.m.get(r, c).raw_terms() {
                match eq_index.get(&(r, c, m.clone())) {
                    Some(&e) => rhs[e] = v.clone(),
                    None => return Ok(HomotopySearch::Inconclusive),
                }
            }
        }
    }
    let mut a = QMat::zeros(entries.len(), nunk);
    for (e, row) in entries.iter().enumerate() {
        for (u, v) in row {
            let cur = a.get(e, *u).clone();
            a.set(e, *u, cur + v);
        }
    }
    let sol = match a.solve(&rhs, field) {
        Some(s) => s,
        None => return Ok(HomotopySearch::Inconclusive),
    };
    let mut hm = PMat::zeros(&ring, y.rank(), x.rank());
    for (s, &(i, j)) in slots.iter().enumerate() {
        let p = Poly::from_terms(
            &ring,
            monos
                .iter()
                .enumerate()
                .map(|(mi, m)| (m.clone(), sol[s * monos.len() + mi].clone())),
        );
        hm.set(i, j, p);
    }
    let h = MFMap::new_unchecked(x, y, h_odd, hm);
    debug_assert_eq!(h.differential(), f.m);
    if h.differential() != f.m {
        return Err(Error::VerificationFailed("homotopy witness".into()));
    }
    Ok(HomotopySearch::Found(h))
}

/// Total degree of the largest monomial in a list.
pub fn max_mono_degree(ms: &[Mono]) -> u32 {
    ms.iter().map(|m| mono_degree(m)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q, Ring};

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    fn m1(r: &RingRef, s: &str) -> PMat {
        PMat::from_rows(r, vec![vec![p(s, r)]])
    }

    #[test]
    fn make_mf_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        assert!(MF::new(&p("x^2", &r), &m1(&r, "x"), &m1(&r, "x")).is_ok());
        assert!(MF::new(&p("x*y", &r), &m1(&r, "x"), &m1(&r, "y")).is_ok());
        let e = MF::new(&p("x^2", &r), &m1(&r, "x"), &m1(&r, "1")).unwrap_err();
        assert!(matches!(e, Error::NotAFactorisation { row: 0, col: 0, .. }));
    }

    #[test]
    fn shift_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = MF::new(&p("x*y", &r), &m1(&r, "x"), &m1(&r, "y")).unwrap();
        let s = x.shift();
        assert_eq!(s.d0(), m1(&r, "-y"));
        assert_eq!(s.d1(), m1(&r, "-x"));
        assert_eq!(s.shift(), x);
        assert_eq!(s.potential(), x.potential());
        s.check().unwrap();
    }

    #[test]
    fn dual_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = MF::new(&p("x*y", &r), &m1(&r, "x"), &m1(&r, "y")).unwrap();
        let d = x.dual();
        assert_eq!(d.d0(), m1(&r, "-y"));
        assert_eq!(d.d1(), m1(&r, "x"));
        assert_eq!(d.potential(), &p("-x*y", &r));
        d.check().unwrap();
        assert_eq!((d.r0(), d.r1()), (1, 1));
    }

    #[test]
    fn koszul_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let k = MF::koszul(&r, &[(p("x", &r), p("x^2", &r)), (p("y", &r), p("y^2", &r))]).unwrap();
        assert_eq!((k.r0(), k.r1()), (2, 2));
        assert_eq!(k.potential(), &p("x^3+y^3", &r));
        let u = MF::koszul(&r, &[]).unwrap();
        assert_eq!((u.r0(), u.r1()), (1, 0));
        assert!(u.potential().is_zero());
    }

    #[test]
    fn tensor_with_unit() {
        let r = Ring::new(&["x"]).unwrap();
        let x = MF::new(&p("x^2", &r), &m1(&r, "x"), &m1(&r, "x")).unwrap();
        assert_eq!(x.tensor(&MF::unit(&r)).unwrap(), x);
        assert_eq!(MF::unit(&r).tensor(&x).unwrap(), x);
    }

    #[test]
    fn hom_examples() {
        let r = Ring::new(&["x"]).unwrap();
        let x = MF::new(&p("x^2", &r), &m1(&r, "x"), &m1(&r, "x")).unwrap();
        let h = x.hom(&x).unwrap();
        assert_eq!((h.r0(), h.r1()), (2, 2));
        assert!(h.potential().is_zero());
        let id = map_to_hom_element(&x, &x, &x.identity().m);
        let dh = h.d();
        let v: Vec<Poly> = (0..h.rank())
            .map(|i| (0..h.rank()).fold(Poly::zero(&r), |s, j| &s + &(dh.get(i, j) * &id[j])))
            .collect();
        assert!(v.iter().all(|e| e.is_zero()));
    }

    #[test]
    fn morphisms_and_homotopies() {
        let r = Ring::new(&["x"]).unwrap();
        let x = MF::new(&p("x^2", &r), &m1(&r, "x"), &m1(&r, "x")).unwrap();
        assert!(x.identity().is_morphism());
        // [d, d] = 2W, so d is a cocycle only over a factorisation of zero
        assert!(!x.d_map().is_morphism());
        assert!(x.hom(&x).unwrap().d_map().is_morphism());
        let l = x.partial_homotopy(0).unwrap();
        assert!(!l.is_morphism());
        assert_eq!(l.m, PMat::from_rows(&r, vec![vec![Poly::zero(&r), Poly::one(&r)], vec![Poly::one(&r), Poly::zero(&r)]]));
        let f = x.identity().scale_poly(&p("2*x", &r));
        let h = find_homotopy(&f, 2).unwrap();
        assert!(h.witness().is_some());
        assert!(matches!(find_homotopy(&x.identity(), 10).unwrap(), HomotopySearch::Inconclusive));
        let z = MFMap::zero(&x, &x, false);
        assert!(find_homotopy(&z, 3).unwrap().witness().unwrap().is_zero());
    }

    #[test]
    fn supertraces() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = MF::new(&p("x*y", &r), &m1(&r, "x"), &m1(&r, "y")).unwrap();
        assert_eq!(x.identity().supertrace().unwrap(), Poly::zero(&r));
        let a = x.partial_homotopy(0).unwrap();
        let b = x.partial_homotopy(1).unwrap();
        assert_eq!(a.compose(&b).unwrap().supertrace().unwrap(), Poly::int(&r, -1));
        let _ = q(0);
    }
}
