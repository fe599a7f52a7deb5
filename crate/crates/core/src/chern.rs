//! Chern characters in the Jacobi algebra, the boundary-bulk map, the Cardy
//! condition and Hirzebruch–Riemann–Roch, cohomology of `Hom(X, Y)`, and the
//! Chern character of a pushforward.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::connection::{Grading, TAdicFrame};
use crate::error::{Error, Result};
use crate::linalg::{Field, QMat};
use crate::mf::{hom_element_to_map, map_to_hom_element, monomials_up_to, supertrace, MFMap, MF};
use crate::pmat::PMat;
use crate::poly::{mono_degree, mono_mul, same_ring, Mono, Poly, Q};
use crate::pushforward::{factorial, idempotent, permutations, split_over_point, supertrace_on_cohomology, FiniteModel};
use crate::residue::{residue_trace, ResidueQuery};

/// A class in a Jacobi algebra, stored as its normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiElement {
    pub rep: Poly,
}

impl JacobiElement {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for JacobiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// `(−1)^{C(n,2)}`.
pub fn binom2_sign(n: usize) -> Q {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

fn parity_sign(n: usize) -> Q {
    if n.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// The frame `t = (∂₁W, …, ∂ₙW)` over all variables; `J_W = R/tR`.
/// Potentials that are not quasi-homogeneous get a bounded frame (residues and
/// normal forms never need the expansion).
pub fn jacobi_frame(w: &Poly) -> Result<TAdicFrame> {
    let ring = w.ring();
    let names: Vec<&str> = ring.vars().iter().map(|s| s.as_str()).collect();
    let partials: Vec<Poly> = (0..ring.nvars()).map(|i| w.partial(i)).collect();
    match TAdicFrame::new(ring, &names, &partials, Grading::Auto) {
        Err(Error::UnsupportedConnection(_)) => {
            let b = w.total_degree().unwrap_or(1) as usize * 2;
            TAdicFrame::new(ring, &names, &partials, Grading::Bound(b))
        }
        r => r,
    }
}

fn class(frame: &TAdicFrame, p: &Poly) -> Result<JacobiElement> {
    Ok(JacobiElement { rep: frame.normal_form(p)? })
}

fn partial_product(x: &MF, vars: &[usize]) -> PMat {
    let mut m = PMat::identity(x.ring(), x.rank());
    for &v in vars {
        m = m.mul(&x.d().partial(v));
    }
    m
}

/// `ch(X) = (−1)^{C(n,2)} str(∂₁d⋯∂ₙd)` in `J_W`.
pub fn chern_character(x: &MF) -> Result<JacobiElement> {
    let frame = jacobi_frame(x.potential())?;
    let n = x.ring().nvars();
    if n % 2 == 1 {
        return Ok(JacobiElement { rep: Poly::zero(x.ring()) });
    }
    let vars: Vec<usize> = (0..n).collect();
    let s = supertrace(&partial_product(x, &vars), x.r0()).scale(&binom2_sign(n));
    class(&frame, &s)
}

/// `β_Y(f) = (−1)^{C(m,2)} str(f·∂₁d⋯∂ₘd)` for an even endomorphism cocycle `f`.
pub fn boundary_bulk(y: &MF, f: &MFMap) -> Result<JacobiElement> {
    if f.odd || f.m.rows() != y.rank() || f.m.cols() != y.rank() || *f.source != *y || *f.target != *y {
        return Err(Error::NotAMorphism("β needs an even endomorphism of the factorisation".into()));
    }
    if !f.is_morphism() {
        return Err(Error::NotAMorphism("f does not commute with the differential".into()));
    }
    let frame = jacobi_frame(y.potential())?;
    let m = y.ring().nvars();
    let vars: Vec<usize> = (0..m).collect();
    let s = supertrace(&f.m.mul(&partial_product(y, &vars)), y.r0()).scale(&binom2_sign(m));
    class(&frame, &s)
}

/// `Res[g·dx / ∂W]` over the Jacobi frame (global residue, a rational number).
pub fn jacobi_residue(frame: &TAdicFrame, g: &Poly) -> Result<Q> {
    Ok(residue_trace(&ResidueQuery::dy(frame, g.clone())?)?.constant_term())
}

/// `⟨a, e_k⟩` for every basis monomial `e_k` of `J_W`.
pub fn jacobi_pairing(frame: &TAdicFrame, a: &Poly) -> Result<Vec<Q>> {
    (0..frame.mu())
        .map(|k| jacobi_residue(frame, &(a * &frame.section(k))))
        .collect()
}

fn check_same_potential(x: &MF, y: &MF) -> Result<()> {
    if !same_ring(x.ring(), y.ring()) || x.potential() != y.potential() {
        return Err(Error::ContextMismatch("factorisations of different potentials".into()));
    }
    Ok(())
}

/// `χ(X, Y) = (−1)^{C(n,2)} Res[ch(X)·ch(Y)·dx / ∂W]`.
pub fn euler_chi_residue(x: &MF, y: &MF) -> Result<Q> {
    check_same_potential(x, y)?;
    let frame = jacobi_frame(x.potential())?;
    let n = x.ring().nvars();
    let (cx, cy) = (chern_character(x)?, chern_character(y)?);
    Ok(jacobi_residue(&frame, &(&cx.rep * &cy.rep))? * binom2_sign(n))
}

/// The finite model of `Hom(X, Y)` pushed forward to the point: frame `t = ∂W`
/// over all variables, `λ_i` = post-composition with `∂_i(d_Y)`.
pub fn hom_model(x: &MF, y: &MF) -> Result<(MF, FiniteModel)> {
    check_same_potential(x, y)?;
    let h = x.hom(y)?;
    let frame = jacobi_frame(x.potential())?;
    let ring = x.ring();
    let lambdas = (0..ring.nvars())
        .map(|i| {
            let dy = y.d().partial(i);
            let m = endomorphism_of_hom(x, y, |phi| dy.mul(phi));
            MFMap::new(&h, &h, true, m)
        })
        .collect::<Result<Vec<_>>>()?;
    let model = idempotent(&h, &frame, &lambdas)?;
    Ok((h, model))
}

/// The matrix on `Hom(X, Y)` of a linear operation on maps `X → Y`.
pub fn endomorphism_of_hom(x: &MF, y: &MF, f: impl Fn(&PMat) -> PMat) -> PMat {
    let ring = x.ring();
    let size = x.rank() * y.rank();
    let mut out = PMat::zeros(ring, size, size);
    for k in 0..size {
        let mut v = vec![Poly::zero(ring); size];
        v[k] = Poly::one(ring);
        let img = map_to_hom_element(x, y, &f(&hom_element_to_map(x, y, &v)));
        for (r, p) in img.into_iter().enumerate() {
            out.set(r, k, p);
        }
    }
    out
}

fn check_endomorphism(x: &MF, f: &MFMap, name: &str) -> Result<()> {
    if f.odd || f.m.rows() != x.rank() || f.m.cols() != x.rank() {
        return Err(Error::NotAMorphism(format!("{name} is not an even endomorphism")));
    }
    let c = MFMap::new_unchecked(x, x, false, f.m.clone());
    if !c.is_morphism() {
        return Err(Error::NotAMorphism(format!("{name} does not commute with the differential")));
    }
    Ok(())
}

/// Both sides of the Cardy condition for even endomorphisms `α` of `X` and `β` of `Y`:
/// `lhs = str(φ ↦ βφα)` on the cohomology of `Hom(X, Y)` (via the finite model),
/// `rhs = (−1)^{C(n,2)} Res[str(α∂₁d_X⋯∂ₙd_X)·str(β∂₁d_Y⋯∂ₙd_Y)·dx / ∂W]`.
pub fn cardy_check(x: &MF, y: &MF, alpha: &MFMap, beta: &MFMap) -> Result<(Q, Q)> {
    check_endomorphism(x, alpha, "α")?;
    check_endomorphism(y, beta, "β")?;
    let (_, model) = hom_model(x, y)?;
    let frame = &model.frame;
    let n = x.ring().nvars();
    let act = endomorphism_of_hom(x, y, |phi| beta.m.mul(phi).mul(&alpha.m));
    let act = frame
        .descend(&act)?
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant action".into()))?;
    let lhs = supertrace_on_cohomology(&model, &act)? * parity_sign(n);

    let vars: Vec<usize> = (0..n).collect();
    let sx = supertrace(&alpha.m.mul(&partial_product(x, &vars)), x.r0());
    let sy = supertrace(&beta.m.mul(&partial_product(y, &vars)), y.r0());
    let rhs = jacobi_residue(frame, &(&sx * &sy))? * binom2_sign(n);
    Ok((lhs, rhs))
}

/// `(dim H⁰, dim H¹)` of `Hom(X, Y)` from the split finite model.
pub fn hom_cohomology(x: &MF, y: &MF) -> Result<(usize, usize)> {
    let (_, model) = hom_model(x, y)?;
    Ok(split_over_point(&model)?.pushforward)
}

/// Sparse column images of `d` applied to `e_b·x^m` for `b` in `src`, `m` in `monos`.
fn sparse_images(d: &PMat, src: &[usize], monos: &[Mono]) -> Vec<BTreeMap<(usize, Mono), Q>> {
    let mut cols = Vec::with_capacity(src.len() * monos.len());
    for &b in src {
        for m in monos {
            let mut col: BTreeMap<(usize, Mono), Q> = BTreeMap::new();
            for r in 0..d.rows() {
                for (dm, c) in d.get(r, b).raw_terms() {
                    let e = col.entry((r, mono_mul(dm, m))).or_insert_with(Q::zero);
                    *e += c;
                }
            }
            col.retain(|_, v| !v.is_zero());
            cols.push(col);
        }
    }
    cols
}

fn sparse_rank(cols: &[BTreeMap<(usize, Mono), Q>], keep: impl Fn(&Mono) -> bool, f: Field) -> usize {
    let mut index: BTreeMap<&(usize, Mono), usize> = BTreeMap::new();
    for col in cols {
        for k in col.keys() {
            if keep(&k.1) {
                let n = index.len();
                index.entry(k).or_insert(n);
            }
        }
    }
    if index.is_empty() {
        return 0;
    }
    let mut m = QMat::zeros(index.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (k, v) in col {
            if let Some(&i) = index.get(k) {
                m.set(i, j, v.clone());
            }
        }
    }
    m.rank(f)
}

/// Cohomology dimensions of the complex `(H, d_H)` (free over `k[x]`) estimated
/// from elements of degree ≤ `k`: cocycles of degree ≤ `k` modulo boundaries of
/// elements of degree ≤ `k + c` that land in degree ≤ `k`.
pub fn truncated_dims(h: &MF, k: u32) -> (usize, usize) {
    let ring = h.ring();
    let f = Field::new(ring.characteristic());
    let c = h.d().max_degree();
    let n = ring.nvars();
    let low = monomials_up_to(n, k);
    let high = monomials_up_to(n, k + c);
    let ev: Vec<usize> = (0..h.r0()).collect();
    let od: Vec<usize> = (h.r0()..h.rank()).collect();
    let d = h.d();
    let dim = |part: &[usize], other: &[usize]| {
        let z = part.len() * low.len() - sparse_rank(&sparse_images(d, part, &low), |_| true, f);
        let im = sparse_images(d, other, &high);
        let all = sparse_rank(&im, |_| true, f);
        let above = sparse_rank(&im, |m| mono_degree(m) > k, f);
        z - (all - above)
    };
    (dim(&ev, &od), dim(&od, &ev))
}

/// Independent oracle for `dim H(Hom(X, Y))`: truncated cohomology, starting at
/// `K = 2·deg W` and stopping once `K` and `K + 1` agree.
pub fn truncation_oracle(x: &MF, y: &MF) -> Result<(usize, usize)> {
    check_same_potential(x, y)?;
    jacobi_frame(x.potential())?;
    let h = x.hom(y)?;
    let start = 2 * x.potential().total_degree().unwrap_or(1).max(1);
    let mut prev = truncated_dims(&h, start);
    for k in start + 1..=start + 16 {
        let cur = truncated_dims(&h, k);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::VerificationFailed("truncated cohomology did not stabilise".into()))
}

/// Chern character of the pushforward `X/tX` over the base by two routes:
/// `(−1)^{n+C(m,2)} str(μ₁⋯μₘ e)` and
/// `(1/n!)(−1)^{C(n+1,2)+C(m,2)} Σ_τ sgn(τ) Res[str(μ₁⋯μₘλ₁⋯λₙ ∂_{τ1}d⋯∂_{τn}d)·dy / t]`,
/// both as normal forms in the base Jacobi algebra. `mus` default to `∂_{x_i}(d_X)`.
pub fn chern_of_pushforward_routes(
    x: &MF,
    model: &FiniteModel,
    mus: Option<&[MFMap]>,
) -> Result<(JacobiElement, JacobiElement)> {
    let frame = &model.frame;
    let base = frame.base_ring();
    let wb = x
        .potential()
        .to_ring(base)
        .map_err(|_| Error::PotentialNotBased(x.potential().to_string()))?;
    let bframe = jacobi_frame(&wb)?;
    let m = base.nvars();
    let n = model.n;
    let mus: Vec<PMat> = match mus {
        Some(ms) => ms.iter().map(|u| u.m.clone()).collect(),
        None => frame.base_vars().iter().map(|&b| x.d().partial(b)).collect(),
    };
    if mus.len() != m {
        return Err(Error::ShapeMismatch(format!("{} base homotopies for {m} base variables", mus.len())));
    }
    for (k, (u, &b)) in mus.iter().zip(frame.base_vars()).enumerate() {
        let lhs = u.mul(x.d()).add(&x.d().mul(u));
        if lhs != PMat::scalar(&x.potential().partial(b), x.rank()) {
            return Err(Error::HomotopyIdentityFailed(format!("μ_{} is not a homotopy for ∂W", k + 1)));
        }
    }
    let mut mu_prod = PMat::identity(x.ring(), x.rank());
    for u in &mus {
        mu_prod = mu_prod.mul(u);
    }

    // e-route
    let mu_hat = frame.descend(&mu_prod)?;
    let s_e = supertrace(&mu_hat.mul(&model.e.m), model.reduced.r0());
    let e_route = class(&bframe, &s_e.scale(&(parity_sign(n) * binom2_sign(m))))?;

    // residue route
    let mut lam = mu_prod;
    for l in &model.lambdas {
        lam = lam.mul(&l.m);
    }
    let dparts: Vec<PMat> = frame.yvars().iter().map(|&v| x.d().partial(v)).collect();
    let mut sum = PMat::zeros(x.ring(), x.rank(), x.rank());
    for (perm, sgn) in permutations(n) {
        let mut t = lam.clone();
        for &k in &perm {
            t = t.mul(&dparts[k]);
        }
        sum = if sgn > 0 { sum.add(&t) } else { sum.sub(&t) };
    }
    let s = supertrace(&sum, x.r0());
    let res = residue_trace(&ResidueQuery::dy(frame, s)?)?;
    let c = Q::new(BigInt::one(), factorial(n)) * binom2_sign(n + 1) * binom2_sign(m);
    let r_route = class(&bframe, &res.scale(&c))?;
    Ok((e_route, r_route))
}

/// Chern character of the pushforward, requiring both routes to agree.
pub fn chern_of_pushforward(x: &MF, model: &FiniteModel, mus: Option<&[MFMap]>) -> Result<JacobiElement> {
    let (a, b) = chern_of_pushforward_routes(x, model, mus)?;
    if a != b {
        return Err(Error::VerificationFailed(format!("e-route {a} ≠ residue route {b}")));
    }
    Ok(a)
}

/// `λ_i = ∂_i d + (dρ_i − ρ_i d)` for even `ρ_i`: alternative homotopies for `∂_iW`.
pub fn alternative_homotopies(x: &MF, rhos: &[PMat]) -> Result<Vec<MFMap>> {
    let n = x.ring().nvars();
    if rhos.len() != n {
        return Err(Error::ShapeMismatch(format!("{} perturbations for {n} variables", rhos.len())));
    }
    let d = x.d();
    (0..n)
        .map(|i| {
            let l = d.partial(i).add(&d.mul(&rhos[i])).sub(&rhos[i].mul(d));
            let map = MFMap::new(x, x, true, l)?;
            let lhs = map.m.mul(d).add(&d.mul(&map.m));
            if lhs != PMat::scalar(&x.potential().partial(i), x.rank()) {
                return Err(Error::HomotopyIdentityFailed(format!("λ_{} d + d λ_{} ≠ ∂W", i + 1, i + 1)));
            }
            Ok(map)
        })
        .collect()
}

/// The class of `str(λ_{i₁}⋯λ_{i_p})` in `J_W`.
pub fn supertrace_class(x: &MF, frame: &TAdicFrame, lambdas: &[&PMat]) -> Result<JacobiElement> {
    let mut m = PMat::identity(x.ring(), x.rank());
    for l in lambdas {
        m = m.mul(l);
    }
    class(frame, &supertrace(&m, x.r0()))
}

/// Helper for tests and the CLI: a ring element as a [`JacobiElement`] of `W`.
pub fn jacobi_class(w: &Poly, p: &Poly) -> Result<JacobiElement> {
    class(&jacobi_frame(w)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring, RingRef};

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn chern_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let k = MF::koszul(&r, &[(p("x", &r), p("y", &r))]).unwrap();
        assert_eq!(chern_character(&k).unwrap().rep, p("1", &r));
        let s = k.direct_sum(&k).unwrap();
        assert_eq!(chern_character(&s).unwrap().rep, p("2", &r));
        assert_eq!(boundary_bulk(&k, &k.identity()).unwrap(), chern_character(&k).unwrap());
        let r1 = Ring::new(&["x"]).unwrap();
        let k1 = MF::koszul(&r1, &[(p("x", &r1), p("x", &r1))]).unwrap();
        assert!(chern_character(&k1).unwrap().is_zero());
    }

    #[test]
    fn euler_examples() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let k = MF::koszul(&r, &[(p("x", &r), p("y", &r))]).unwrap();
        assert_eq!(euler_chi_residue(&k, &k).unwrap(), Q::one());
        let kk = k.direct_sum(&k).unwrap();
        assert_eq!(euler_chi_residue(&k, &kk).unwrap(), Q::from_integer(2.into()));
        assert_eq!(hom_cohomology(&k, &k).unwrap(), (1, 0));
        assert_eq!(truncation_oracle(&k, &k).unwrap(), (1, 0));
        let (l, rr) = cardy_check(&k, &k, &k.identity(), &k.identity()).unwrap();
        assert_eq!(l, Q::one());
        assert_eq!(rr, Q::one());
    }

    #[test]
    fn one_variable_hom() {
        let r = Ring::new(&["x"]).unwrap();
        let k = MF::koszul(&r, &[(p("x", &r), p("x", &r))]).unwrap();
        assert_eq!(truncation_oracle(&k, &k).unwrap(), (1, 1));
        assert_eq!(hom_cohomology(&k, &k).unwrap(), (1, 1));
        let a = MF::koszul(&r, &[(p("x", &r), p("x^3", &r))]).unwrap();
        let b = MF::koszul(&r, &[(p("x^2", &r), p("x^2", &r))]).unwrap();
        let o = truncation_oracle(&a, &b).unwrap();
        assert_eq!(o.0, o.1);
        assert_eq!(hom_cohomology(&a, &b).unwrap(), o);
        assert!(euler_chi_residue(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn cardy_on_cubic() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let k = MF::koszul(&r, &[(p("x", &r), p("x^2", &r)), (p("y", &r), p("y^2", &r))]).unwrap();
        let (l, rr) = cardy_check(&k, &k, &k.identity(), &k.identity()).unwrap();
        assert_eq!(l, rr);
        assert_eq!(l, euler_chi_residue(&k, &k).unwrap());
        let xm = MFMap::new(&k, &k, false, PMat::scalar(&p("x", &r), k.rank())).unwrap();
        let (l, rr) = cardy_check(&k, &k, &xm, &k.identity()).unwrap();
        assert_eq!(l, rr);
        let z = MFMap::zero(&k, &k, false);
        assert_eq!(cardy_check(&k, &k, &z, &k.identity()).unwrap(), (Q::zero(), Q::zero()));
    }
}
