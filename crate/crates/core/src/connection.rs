//! t-adic frames: the standard-monomial section, expansion in powers of `t`,
//! descended connection operators `[∂/∂t_j, r]`, and the de Rham contraction of
//! the Koszul complex.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, QuotientAlgebra};
use crate::linalg::{Field, QMat};
use crate::pmat::PMat;
use crate::poly::{Mono, Poly, Ring, RingRef, Q};

/// How a frame controls the `t`-adic expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum Grading {
    /// Find positive weights making every `t_j` quasi-homogeneous.
    Auto,
    /// Explicit positive weights on the integrated variables.
    Weights(Vec<Q>),
    /// Truncate expansions at this total `t`-degree.
    Bound(usize),
}

/// The integrated-out variables `y`, a zero-dimensional sequence `t ⊂ k[y]`, and
/// the section σ given by standard monomials.
#[derive(Clone, Debug)]
pub struct TAdicFrame {
    ring: RingRef,
    yvars: Vec<usize>,
    bvars: Vec<usize>,
    base: RingRef,
    yring: RingRef,
    tgens: Vec<Poly>,
    gb: GroebnerBasis,
    quotient: QuotientAlgebra,
    weights: Option<Vec<Q>>,
    bound: Option<usize>,
}

/// A `t`-adic expansion `p = Σ_M σ(r_M)·t^M`, keyed by exponent vectors `M`.
pub type Expansion = BTreeMap<Vec<u32>, Poly>;

/// An element of `R ⊗ Ω`: `dt_I` (bitmask over `t` indices) ↦ coefficient.
pub type Form = BTreeMap<u32, Poly>;

fn positive_weights(tys: &[Poly]) -> Option<Vec<Q>> {
    let n = tys.first()?.ring().nvars();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for t in tys {
        let ms: Vec<&Mono> = t.raw_terms().map(|(m, _)| m).collect();
        if ms.is_empty() {
            return None;
        }
        for m in &ms[1..] {
            rows.push(
                m.iter()
                    .zip(ms[0])
                    .map(|(&a, &b)| Q::from_integer(BigInt::from(a as i64 - b as i64)))
                    .collect(),
            );
        }
    }
    let ones = vec![Q::one(); n];
    if rows.is_empty() {
        return Some(ones);
    }
    let a = QMat::from_rows(rows);
    if a.mul_vec(&ones).iter().all(|x| x.is_zero()) {
        return Some(ones);
    }
    let ns = a.nullspace(Field::Q);
    // try each basis vector and the sum of sign-normalised basis vectors
    let mut candidates: Vec<Vec<Q>> = ns.clone();
    let mut sum = vec![Q::zero(); n];
    for v in &ns {
        let s = if v.iter().any(|x| x.is_negative()) && v.iter().all(|x| !x.is_positive()) {
            -Q::one()
        } else {
            Q::one()
        };
        for (acc, x) in sum.iter_mut().zip(v) {
            *acc += &s * x;
        }
    }
    candidates.push(sum);
    for v in candidates {
        for s in [Q::one(), -Q::one()] {
            let w: Vec<Q> = v.iter().map(|x| &s * x).collect();
            if w.iter().all(|x| x.is_positive()) {
                return Some(w);
            }
        }
    }
    None
}

fn weighted(m: &[u32], w: &[Q]) -> Q {
    m.iter()
        .zip(w)
        .fold(Q::zero(), |s, (&e, x)| s + x * Q::from_integer(BigInt::from(e)))
}

impl TAdicFrame {
    pub fn new(ring: &RingRef, yvars: &[&str], tgens: &[Poly], grading: Grading) -> Result<TAdicFrame> {
        let mut yidx = Vec::new();
        for v in yvars {
            let i = ring
                .var_index(v)
                .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
            if yidx.contains(&i) {
                return Err(Error::InvalidRing(format!("variable `{v}` listed twice")));
            }
            yidx.push(i);
        }
        yidx.sort_unstable();
        let bidx: Vec<usize> = (0..ring.nvars()).filter(|i| !yidx.contains(i)).collect();
        let ynames: Vec<&str> = yidx.iter().map(|&i| ring.vars()[i].as_str()).collect();
        let bnames: Vec<&str> = bidx.iter().map(|&i| ring.vars()[i].as_str()).collect();
        let yring = Ring::with_options(&ynames, ring.order(), ring.characteristic())?;
        let base = Ring::with_options(&bnames, ring.order(), ring.characteristic())?;
        let mut tys = Vec::new();
        for t in tgens {
            if !crate::poly::same_ring(t.ring(), ring) {
                return Err(Error::ContextMismatch("t-generator ring".into()));
            }
            for &b in &bidx {
                if t.involves(b) {
                    return Err(Error::InvalidRing(format!(
                        "t-generator `{t}` involves base variable `{}`",
                        ring.vars()[b]
                    )));
                }
            }
            tys.push(t.to_ring(&yring)?);
        }
        if tys.is_empty() && !yidx.is_empty() {
            return Err(Error::NotZeroDimensional("no t-generators".into()));
        }
        let quotient = if tys.is_empty() {
            QuotientAlgebra::new(GroebnerBasis::new(&[Poly::zero(&yring)])?)?
        } else {
            QuotientAlgebra::from_generators(&tys)?
        };
        let gb = if tgens.is_empty() {
            GroebnerBasis::new(&[Poly::zero(ring)])?
        } else {
            GroebnerBasis::new(tgens)?
        };
        let (weights, bound) = match grading {
            Grading::Weights(w) => {
                if w.len() != yidx.len() || w.iter().any(|x| !x.is_positive()) {
                    return Err(Error::UnsupportedConnection("weights must be positive, one per integrated variable".into()));
                }
                for t in &tys {
                    match t.quasi_degree(&w) {
                        Some(d) if d.is_positive() => {}
                        _ => {
                            return Err(Error::UnsupportedConnection(format!(
                                "`{t}` is not quasi-homogeneous of positive degree for the given weights"
                            )))
                        }
                    }
                }
                (Some(w), None)
            }
            Grading::Bound(b) => (positive_weights_checked(&tys), Some(b)),
            Grading::Auto => match positive_weights_checked(&tys) {
                Some(w) => (Some(w), None),
                None if tys.is_empty() => (Some(vec![]), None),
                None => {
                    return Err(Error::UnsupportedConnection(
                        "t is not quasi-homogeneous for any positive weights and no expansion bound was given".into(),
                    ))
                }
            },
        };
        Ok(TAdicFrame {
            ring: ring.clone(),
            yvars: yidx,
            bvars: bidx,
            base,
            yring,
            tgens: tgens.to_vec(),
            gb,
            quotient,
            weights: if bound.is_some() { None } else { weights },
            bound,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn base_ring(&self) -> &RingRef {
        &self.base
    }

    pub fn y_ring(&self) -> &RingRef {
        &self.yring
    }

    pub fn yvars(&self) -> &[usize] {
        &self.yvars
    }

    pub fn base_vars(&self) -> &[usize] {
        &self.bvars
    }

    pub fn tgens(&self) -> &[Poly] {
        &self.tgens
    }

    pub fn n(&self) -> usize {
        self.tgens.len()
    }

    pub fn mu(&self) -> usize {
        self.quotient.dim()
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn weights(&self) -> Option<&[Q]> {
        self.weights.as_deref()
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    /// Whether results are exact (quasi-homogeneous) rather than truncated.
    pub fn is_graded(&self) -> bool {
        self.bound.is_none()
    }

    pub fn field(&self) -> Field {
        Field::new(self.ring.characteristic())
    }

    /// σ(e_m) as a polynomial of the full ring.
    pub fn section(&self, m: usize) -> Poly {
        let ym = &self.quotient.basis()[m];
        let mut e = vec![0u32; self.ring.nvars()];
        for (k, &i) in self.yvars.iter().enumerate() {
            e[i] = ym[k];
        }
        Poly::monomial(&self.ring, e, Q::one())
    }

    /// Embed a base-ring polynomial into the full ring.
    pub fn from_base(&self, p: &Poly) -> Result<Poly> {
        p.to_ring(&self.ring)
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        if self.tgens.is_empty() {
            return Ok(p.clone());
        }
        self.gb.normal_form(p)
    }

    /// Cofactors `a` with `p = Σ a_j t_j`, via the fixed division strategy.
    pub fn lift(&self, p: &Poly) -> Result<Vec<Poly>> {
        if self.tgens.is_empty() {
            return if p.is_zero() { Ok(vec![]) } else { Err(Error::NotInIdeal) };
        }
        self.gb.ideal_lift(p)
    }

    /// Coordinates of the class of `p` in the basis `e_m`, with base-ring coefficients.
    pub fn coords(&self, p: &Poly) -> Result<Vec<Poly>> {
        let nf = self.normal_form(p)?;
        let mut out = vec![Poly::zero(&self.base); self.mu()];
        for (m, c) in nf.raw_terms() {
            let ym: Mono = self.yvars.iter().map(|&i| m[i]).collect();
            let bm: Mono = self.bvars.iter().map(|&i| m[i]).collect();
            let k = self
                .quotient
                .index_of(&ym)
                .expect("normal form is spanned by standard monomials");
            out[k].add_term(bm, c.clone());
        }
        Ok(out)
    }

    /// Σ_m c_m σ(e_m) for base-ring coefficients `c`.
    pub fn from_coords(&self, c: &[Poly]) -> Result<Poly> {
        let mut p = Poly::zero(&self.ring);
        for (m, cm) in c.iter().enumerate() {
            if cm.is_zero() {
                continue;
            }
            p = &p + &(&self.from_base(cm)? * &self.section(m));
        }
        Ok(p)
    }

    /// Multiplication by `r` on `R/tR`; column `m` is the class of `r·e_m`.
    pub fn mult_operator(&self, r: &Poly) -> Result<PMat> {
        let mu = self.mu();
        let mut m = PMat::zeros(&self.base, mu, mu);
        for c in 0..mu {
            let col = self.coords(&(r * &self.section(c)))?;
            for (rr, v) in col.into_iter().enumerate() {
                m.set(rr, c, v);
            }
        }
        Ok(m)
    }

    /// The descended operator `[∂/∂t_j, r]` on `R/tR`: column `m` is the class of the
    /// `t_j`-cofactor of `r·e_m − σ(NF(r·e_m))`.
    pub fn commutator_operator(&self, j: usize, r: &Poly) -> Result<PMat> {
        let mu = self.mu();
        let mut m = PMat::zeros(&self.base, mu, mu);
        for c in 0..mu {
            let q = r * &self.section(c);
            let rest = &q - &self.normal_form(&q)?;
            let a = self.lift(&rest)?;
            let col = self.coords(&a[j])?;
            for (rr, v) in col.into_iter().enumerate() {
                m.set(rr, c, v);
            }
        }
        Ok(m)
    }

    /// Block matrix of multiplication operators: entry `(i·μ+m', j·μ+m)`.
    pub fn descend(&self, a: &PMat) -> Result<PMat> {
        self.blockwise(a, |p| self.mult_operator(p))
    }

    /// Block matrix of commutators `[∂/∂t_k, a_ij]`.
    pub fn descend_commutator(&self, k: usize, a: &PMat) -> Result<PMat> {
        self.blockwise(a, |p| self.commutator_operator(k, p))
    }

    fn blockwise(&self, a: &PMat, f: impl Fn(&Poly) -> Result<PMat>) -> Result<PMat> {
        let mu = self.mu();
        let mut out = PMat::zeros(&self.base, a.rows() * mu, a.cols() * mu);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if a.get(i, j).is_zero() {
                    continue;
                }
                out.put(i * mu, j * mu, &f(a.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// `t^M` as a polynomial.
    pub fn t_power(&self, m: &[u32]) -> Poly {
        let mut p = Poly::one(&self.ring);
        for (j, &e) in m.iter().enumerate() {
            p = &p * &self.tgens[j].pow(e);
        }
        p
    }

    /// Expansion `p = Σ σ(r_M) t^M` up to total `t`-degree `max_degree`.
    /// Returns the expansion and whether it is exact (nothing left beyond the bound).
    pub fn t_expand_bounded(&self, p: &Poly, max_degree: usize) -> Result<(Expansion, bool)> {
        let n = self.n();
        let mut out = Expansion::new();
        let mut pending: BTreeMap<(u32, Vec<u32>), Poly> = BTreeMap::new();
        pending.insert((0, vec![0; n]), p.clone());
        let mut exact = true;
        while let Some(((deg, m), q)) = pending.pop_first() {
            if q.is_zero() {
                continue;
            }
            if deg as usize > max_degree {
                exact = false;
                break;
            }
            let r = self.normal_form(&q)?;
            let rest = &q - &r;
            if !r.is_zero() {
                out.insert(m.clone(), r);
            }
            if rest.is_zero() {
                continue;
            }
            let a = self.lift(&rest)?;
            for (j, aj) in a.into_iter().enumerate() {
                if aj.is_zero() {
                    continue;
                }
                let mut m2 = m.clone();
                m2[j] += 1;
                let e = pending
                    .entry((deg + 1, m2))
                    .or_insert_with(|| Poly::zero(&self.ring));
                *e = &*e + &aj;
            }
        }
        Ok((out, exact))
    }

    /// Expansion with the frame's own policy: exact for graded frames, truncated
    /// at the configured bound otherwise.
    pub fn t_expand(&self, p: &Poly) -> Result<Expansion> {
        match self.bound {
            Some(b) => Ok(self.t_expand_bounded(p, b)?.0),
            None => {
                let cap = self.expansion_cap(p);
                let (e, exact) = self.t_expand_bounded(p, cap)?;
                if !exact {
                    return Err(Error::BoundExceeded(cap));
                }
                Ok(e)
            }
        }
    }

    /// Expansion to at most `b`; errors if `b` exceeds a non-graded frame's bound.
    pub fn t_expand_to(&self, p: &Poly, b: usize) -> Result<Expansion> {
        if let Some(fb) = self.bound {
            if b > fb {
                return Err(Error::BoundExceeded(fb));
            }
        }
        Ok(self.t_expand_bounded(p, b)?.0)
    }

    /// Upper bound on the `t`-degree of an exact expansion in the graded case.
    fn expansion_cap(&self, p: &Poly) -> usize {
        let w = match &self.weights {
            Some(w) => w,
            None => return self.bound.unwrap_or(0),
        };
        if self.tgens.is_empty() {
            return 0;
        }
        let ty: Vec<Q> = self
            .tgens
            .iter()
            .map(|t| {
                let yt = t.to_ring(&self.yring).expect("t in y ring");
                yt.quasi_degree(w).expect("graded")
            })
            .collect();
        let min_t = ty.iter().min().cloned().unwrap_or_else(Q::one);
        let maxdeg = p
            .raw_terms()
            .map(|(m, _)| {
                let ym: Vec<u32> = self.yvars.iter().map(|&i| m[i]).collect();
                weighted(&ym, w)
            })
            .max()
            .unwrap_or_else(Q::zero);
        let k = (maxdeg / min_t).floor().to_integer();
        let k: usize = k.try_into().unwrap_or(0);
        k + 1
    }

    /// Coefficient extraction `r ↦ class of r_{e_j}` for the expansion of `r·σ(e_m)`.
    pub fn coefficient_operator(&self, j: usize, r: &Poly) -> Result<PMat> {
        let mu = self.mu();
        let mut m = PMat::zeros(&self.base, mu, mu);
        let mut ej = vec![0u32; self.n()];
        ej[j] = 1;
        for c in 0..mu {
            let ex = self.t_expand_to(&(r * &self.section(c)), 1)?;
            if let Some(p) = ex.get(&ej) {
                for (rr, v) in self.coords(p)?.into_iter().enumerate() {
                    m.set(rr, c, v);
                }
            }
        }
        Ok(m)
    }

    // ------------------------------------------------------------ Koszul complex

    fn insert_dt(&self, j: usize, set: u32) -> Option<(u32, bool)> {
        if set & (1 << j) != 0 {
            return None;
        }
        let below = (set & ((1u32 << j) - 1)).count_ones();
        Some((set | (1 << j), below % 2 == 1))
    }

    fn add_to(form: &mut Form, key: u32, p: Poly) {
        if p.is_zero() {
            return;
        }
        match form.get_mut(&key) {
            Some(e) => {
                *e = &*e + &p;
                if e.is_zero() {
                    form.remove(&key);
                }
            }
            None => {
                form.insert(key, p);
            }
        }
    }

    /// Koszul differential δ: contraction with `Σ t_i (dt_i)^*`.
    pub fn delta(&self, w: &Form) -> Form {
        let mut out = Form::new();
        for (&set, p) in w {
            let mut k = 0;
            for i in 0..self.n() {
                if set & (1 << i) == 0 {
                    continue;
                }
                let term = &self.tgens[i] * p;
                let term = if k % 2 == 1 { -&term } else { term };
                TAdicFrame::add_to(&mut out, set & !(1 << i), term);
                k += 1;
            }
        }
        out
    }

    /// The flat connection ∇ extended to forms.
    pub fn nabla(&self, w: &Form) -> Result<Form> {
        self.nabla_scaled(w, false)
    }

    /// The de Rham contraction `H = τ^{-1} ∇`.
    pub fn contraction(&self, w: &Form) -> Result<Form> {
        self.nabla_scaled(w, true)
    }

    fn nabla_scaled(&self, w: &Form, scale: bool) -> Result<Form> {
        let mut out = Form::new();
        for (&set, p) in w {
            let ex = self.t_expand(p)?;
            for (m, r) in &ex {
                let total: u32 = m.iter().sum::<u32>() + set.count_ones();
                for j in 0..self.n() {
                    if m[j] == 0 {
                        continue;
                    }
                    let Some((set2, neg)) = self.insert_dt(j, set) else {
                        continue;
                    };
                    let mut m2 = m.clone();
                    m2[j] -= 1;
                    let mut c = Q::from_integer(BigInt::from(m[j]));
                    if scale {
                        c /= Q::from_integer(BigInt::from(total));
                    }
                    if neg {
                        c = -c;
                    }
                    let term = (r * &self.t_power(&m2)).scale(&c);
                    TAdicFrame::add_to(&mut out, set2, term);
                }
            }
        }
        Ok(out)
    }

    /// σπ: keep the degree-zero part and replace it by its normal form.
    pub fn sigma_pi(&self, w: &Form) -> Result<Form> {
        let mut out = Form::new();
        if let Some(p) = w.get(&0) {
            TAdicFrame::add_to(&mut out, 0, self.normal_form(p)?);
        }
        Ok(out)
    }

    /// π: the class (coordinates) of the degree-zero part.
    pub fn pi(&self, w: &Form) -> Result<Vec<Poly>> {
        match w.get(&0) {
            Some(p) => self.coords(p),
            None => Ok(vec![Poly::zero(&self.base); self.mu()]),
        }
    }

    /// σ(e_m) as a form.
    pub fn sigma(&self, m: usize) -> Form {
        let mut f = Form::new();
        f.insert(0, self.section(m));
        f
    }

    /// Spanning set for the identity checks: `y^a·dt_I` with `|a| ≤ deg`.
    pub fn spanning_forms(&self, deg: u32) -> Vec<Form> {
        let ny = self.yvars.len();
        let monos = crate::mf::monomials_up_to(ny, deg);
        let mut out = Vec::new();
        for set in 0..(1u32 << self.n()) {
            for ym in &monos {
                let mut e = vec![0u32; self.ring.nvars()];
                for (k, &i) in self.yvars.iter().enumerate() {
                    e[i] = ym[k];
                }
                let mut f = Form::new();
                f.insert(set, Poly::monomial(&self.ring, e, Q::one()));
                out.push(f);
            }
        }
        out
    }

    /// Verify `H² = 0`, `Hσ = 0`, `πH = 0` and `δH + Hδ = 1 − σπ` on a spanning set.
    pub fn check_contraction(&self, deg: u32) -> Result<ContractionReport> {
        if !self.is_graded() {
            return Err(Error::UnsupportedConnection("de Rham contraction needs a graded frame".into()));
        }
        let mut report = ContractionReport::default();
        for w in self.spanning_forms(deg) {
            report.checked += 1;
            let h = self.contraction(&w)?;
            if !self.contraction(&h)?.is_empty() {
                report.h_squared = false;
            }
            if !self.pi(&h)?.iter().all(|p| p.is_zero()) {
                report.pi_h = false;
            }
            let lhs = add_forms(&self.delta(&h), &self.contraction(&self.delta(&w))?);
            let rhs = sub_forms(&w, &self.sigma_pi(&w)?);
            if lhs != rhs {
                report.homotopy = false;
            }
        }
        for m in 0..self.mu() {
            if !self.contraction(&self.sigma(m))?.is_empty() {
                report.h_sigma = false;
            }
        }
        Ok(report)
    }
}

fn positive_weights_checked(tys: &[Poly]) -> Option<Vec<Q>> {
    let w = positive_weights(tys)?;
    for t in tys {
        match t.quasi_degree(&w) {
            Some(d) if d.is_positive() => {}
            _ => return None,
        }
    }
    Some(w)
}

pub fn add_forms(a: &Form, b: &Form) -> Form {
    let mut out = a.clone();
    for (k, p) in b {
        TAdicFrame::add_to(&mut out, *k, p.clone());
    }
    out
}

pub fn sub_forms(a: &Form, b: &Form) -> Form {
    let mut out = a.clone();
    for (k, p) in b {
        TAdicFrame::add_to(&mut out, *k, -p);
    }
    out
}

/// Outcome of [`TAdicFrame::check_contraction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub checked: usize,
    pub h_squared: bool,
    pub h_sigma: bool,
    pub pi_h: bool,
    pub homotopy: bool,
}

impl Default for ContractionReport {
    fn default() -> Self {
        ContractionReport {
            checked: 0,
            h_squared: true,
            h_sigma: true,
            pi_h: true,
            homotopy: true,
        }
    }
}

impl ContractionReport {
    pub fn all_hold(&self) -> bool {
        self.h_squared && self.h_sigma && self.pi_h && self.homotopy
    }
}

pub fn make_frame(ring: &RingRef, yvars: &[&str], tgens: &[Poly], grading: Grading) -> Result<TAdicFrame> {
    TAdicFrame::new(ring, yvars, tgens, grading)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, qf};

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn frame_examples() {
        let r = Ring::new(&["x", "u", "v"]).unwrap();
        let f = TAdicFrame::new(&r, &["u", "v"], &[p("u", &r), p("v", &r)], Grading::Auto).unwrap();
        assert_eq!(f.mu(), 1);
        let r1 = Ring::new(&["y"]).unwrap();
        let g = TAdicFrame::new(&r1, &["y"], &[p("3*y^2", &r1)], Grading::Auto).unwrap();
        assert_eq!(g.mu(), 2);
        assert_eq!(g.weights().unwrap(), &[Q::one()]);
        assert!(matches!(
            TAdicFrame::new(&r1, &["y"], &[p("y^2-1", &r1)], Grading::Auto),
            Err(Error::UnsupportedConnection(_))
        ));
        assert!(TAdicFrame::new(&r1, &["y"], &[p("y^2-1", &r1)], Grading::Bound(4)).is_ok());
    }

    #[test]
    fn expansion_examples() {
        let r = Ring::new(&["y"]).unwrap();
        let f = TAdicFrame::new(&r, &["y"], &[p("y^2", &r)], Grading::Auto).unwrap();
        let e = f.t_expand_to(&p("y^3", &r), 1).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[&vec![1]], p("y", &r));
        let e = f.t_expand(&p("y", &r)).unwrap();
        assert_eq!(e[&vec![0]], p("y", &r));
        let e = f.t_expand(&p("y^2", &r)).unwrap();
        assert_eq!(e[&vec![1]], p("1", &r));
    }

    #[test]
    fn commutator_examples() {
        let r = Ring::new(&["x", "u", "v"]).unwrap();
        let f = TAdicFrame::new(&r, &["u", "v"], &[p("u", &r), p("v", &r)], Grading::Auto).unwrap();
        let c = f.commutator_operator(0, &p("u", &r)).unwrap();
        assert_eq!(c, PMat::identity(f.base_ring(), 1));
        assert!(f.commutator_operator(0, &p("3", &r)).unwrap().is_zero());

        let r1 = Ring::new(&["y"]).unwrap();
        let g = TAdicFrame::new(&r1, &["y"], &[p("3*y^2", &r1)], Grading::Auto).unwrap();
        let c = g.commutator_operator(0, &p("y", &r1)).unwrap();
        let b = g.base_ring();
        let expect = PMat::from_rows(
            b,
            vec![
                vec![Poly::zero(b), Poly::constant(b, qf(1, 3))],
                vec![Poly::zero(b), Poly::zero(b)],
            ],
        );
        assert_eq!(c, expect);
    }

    #[test]
    fn contraction_on_two_linear_generators() {
        let r = Ring::new(&["u", "v"]).unwrap();
        let f = TAdicFrame::new(&r, &["u", "v"], &[p("u", &r), p("v", &r)], Grading::Auto).unwrap();
        let rep = f.check_contraction(3).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
        let mut w = Form::new();
        w.insert(0b11, p("u", &r));
        let lhs = add_forms(&f.delta(&f.contraction(&w).unwrap()), &f.contraction(&f.delta(&w)).unwrap());
        assert_eq!(lhs, w);
    }

    #[test]
    fn contraction_on_jacobian_frames() {
        for (vars, v) in [
            (vec!["y"], "y^3"),
            (vec!["y"], "y^4"),
            (vec!["y1", "y2"], "y1^2 + y2^2"),
            (vec!["y1", "y2"], "y1^3 + y2^3"),
        ] {
            let r = Ring::new(&vars).unwrap();
            let vp = p(v, &r);
            let ts: Vec<Poly> = (0..vars.len()).map(|i| vp.partial(i)).collect();
            let f = TAdicFrame::new(&r, &vars, &ts, Grading::Auto).unwrap();
            let rep = f.check_contraction(4).unwrap();
            assert!(rep.all_hold(), "{v}: {rep:?}");
        }
    }
}
