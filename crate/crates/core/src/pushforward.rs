//! The finite model `X/tX` of a pushforward: the idempotent `e` (closed form
//! and perturbation route), the maps `ε`, `ϑ′`, `ϑ`, splitting over a field and
//! reduction of contractible rank-(1,1) summands.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::connection::{Form, TAdicFrame};
use crate::error::{Error, Result};
use crate::linalg::{Field, QMat};
use crate::mf::{find_homotopy, HomotopySearch, MFMap, MF};
use crate::pmat::PMat;
use crate::poly::{Poly, Q};

/// `X/tX` over the base ring together with its idempotent.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    pub frame: TAdicFrame,
    pub reduced: MF,
    pub e: MFMap,
    pub lambdas: Vec<MFMap>,
    pub n: usize,
    pub strict: bool,
}

impl FiniteModel {
    /// The sign `(−1)^{C(n+1,2)}` attached to the model.
    pub fn sign(&self) -> i64 {
        if (self.n * (self.n + 1) / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `X ⊗_R R/tR` in the basis `ξ_i ⊗ e_m` (index `i·μ + m`).
pub fn reduce_mod_t(x: &MF, frame: &TAdicFrame) -> Result<MF> {
    if !crate::poly::same_ring(x.ring(), frame.ring()) {
        return Err(Error::ContextMismatch("factorisation and frame".into()));
    }
    let w = x
        .potential()
        .to_ring(frame.base_ring())
        .map_err(|_| Error::PotentialNotBased(x.potential().to_string()))?;
    let mu = frame.mu();
    let d = frame.descend(x.d())?;
    MF::from_full(&w, x.r0() * mu, x.r1() * mu, d)
}

/// Verify `λ_j d + d λ_j = t_j·1` for every `j`.
pub fn check_lambdas(x: &MF, frame: &TAdicFrame, lambdas: &[MFMap]) -> Result<()> {
    if lambdas.len() != frame.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} homotopies for {} generators",
            lambdas.len(),
            frame.n()
        )));
    }
    for (j, l) in lambdas.iter().enumerate() {
        if !l.odd || l.m.rows() != x.rank() || l.m.cols() != x.rank() {
            return Err(Error::HomotopyIdentityFailed(format!("λ_{} is not an odd endomorphism", j + 1)));
        }
        let lhs = l.m.mul(x.d()).add(&x.d().mul(&l.m));
        if lhs != PMat::scalar(&frame.tgens()[j], x.rank()) {
            return Err(Error::HomotopyIdentityFailed(format!(
                "λ_{} d + d λ_{} ≠ {}",
                j + 1,
                j + 1,
                frame.tgens()[j]
            )));
        }
    }
    Ok(())
}

fn check_characteristic(frame: &TAdicFrame) -> Result<()> {
    let p = frame.ring().characteristic();
    if p != 0 && p as usize <= frame.n() {
        return Err(Error::CharacteristicTooSmall {
            p,
            need: frame.n() as u64,
        });
    }
    Ok(())
}

/// Permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if cur.len() == n {
            let mut inv = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if cur[a] > cur[b] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn lambda_product(frame: &TAdicFrame, lambdas: &[MFMap], size: usize) -> Result<PMat> {
    let mut prod = PMat::identity(frame.base_ring(), size);
    for l in lambdas {
        prod = prod.mul(&frame.descend(&l.m)?);
    }
    Ok(prod)
}

/// `e = (1/n!)(−1)^{C(n,2)} Σ_τ sgn(τ) λ_1⋯λ_n [∂_{τ1}, d]⋯[∂_{τn}, d]` on `X/tX`.
pub fn idempotent(x: &MF, frame: &TAdicFrame, lambdas: &[MFMap]) -> Result<FiniteModel> {
    check_lambdas(x, frame, lambdas)?;
    check_characteristic(frame)?;
    let reduced = reduce_mod_t(x, frame)?;
    let n = frame.n();
    let size = reduced.rank();
    let lam = lambda_product(frame, lambdas, size)?;
    let comms: Vec<PMat> = (0..n)
        .map(|k| frame.descend_commutator(k, x.d()))
        .collect::<Result<_>>()?;
    let mut sum = PMat::zeros(frame.base_ring(), size, size);
    for (perm, sgn) in permutations(n) {
        let mut term = lam.clone();
        for &k in &perm {
            term = term.mul(&comms[k]);
        }
        sum = if sgn > 0 { sum.add(&term) } else { sum.sub(&term) };
    }
    let mut c = Q::new(BigInt::one(), factorial(n));
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        c = -c;
    }
    let e = MFMap::new_unchecked(&reduced, &reduced, false, sum.scale(&c));
    let strict = e.is_morphism();
    Ok(FiniteModel {
        frame: frame.clone(),
        reduced,
        e,
        lambdas: lambdas.to_vec(),
        n,
        strict,
    })
}

/// `ϑ = (−1)^n λ_1⋯λ_n` descended to `X/tX`, as a map of parity `n`.
pub fn theta_map(x: &MF, frame: &TAdicFrame, lambdas: &[MFMap]) -> Result<MFMap> {
    check_lambdas(x, frame, lambdas)?;
    let reduced = reduce_mod_t(x, frame)?;
    let n = frame.n();
    let mut m = lambda_product(frame, lambdas, reduced.rank())?;
    if n % 2 == 1 {
        m = m.neg();
    }
    Ok(MFMap::new_unchecked(&reduced, &reduced, n % 2 == 1, m))
}

/// Elements of `X ⊗ Ω`: one form per basis vector of `X`.
pub type XForm = Vec<Form>;

fn xform_add(a: &mut XForm, b: &XForm) {
    for (ai, bi) in a.iter_mut().zip(b) {
        *ai = crate::connection::add_forms(ai, bi);
    }
}

fn xform_neg(a: &XForm) -> XForm {
    a.iter()
        .map(|f| f.iter().map(|(k, p)| (*k, -p)).collect())
        .collect()
}

/// `(f ⊗ 1)(v)` for a polynomial matrix `f`.
fn apply_matrix(m: &PMat, v: &XForm) -> XForm {
    let mut out: XForm = vec![Form::new(); m.rows()];
    for (i, oi) in out.iter_mut().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            let a = m.get(i, j);
            if a.is_zero() {
                continue;
            }
            let scaled: Form = vj.iter().map(|(k, p)| (*k, a * p)).collect();
            *oi = crate::connection::add_forms(oi, &scaled);
        }
    }
    out
}

/// `(1 ⊗ g)(ξ_i ⊗ ω) = (−1)^{|ξ_i|} ξ_i ⊗ g(ω)` for an odd operator `g`.
fn apply_odd(x: &MF, v: &XForm, g: impl Fn(&Form) -> Result<Form>) -> Result<XForm> {
    let mut out = Vec::with_capacity(v.len());
    for (i, vi) in v.iter().enumerate() {
        let r = g(vi)?;
        out.push(if x.odd(i) {
            r.into_iter().map(|(k, p)| (k, -p)).collect()
        } else {
            r
        });
    }
    Ok(out)
}

/// `dt_j ∧ −` on `X ⊗ Ω`.
fn wedge_dt(x: &MF, j: usize, v: &XForm) -> Result<XForm> {
    apply_odd(x, v, |f| {
        let mut out = Form::new();
        for (&set, p) in f {
            if set & (1 << j) != 0 {
                continue;
            }
            let below = (set & ((1u32 << j) - 1)).count_ones();
            let t = if below % 2 == 1 { -p } else { p.clone() };
            out.insert(set | (1 << j), t);
        }
        Ok(out)
    })
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

/// `ε(x·dt_1⋯dt_n) = (−1)^{n|x|} x`.
fn epsilon(x: &MF, n: usize, v: &XForm) -> Vec<Poly> {
    let mask = full_mask(n);
    v.iter()
        .enumerate()
        .map(|(i, f)| {
            let p = f.get(&mask).cloned().unwrap_or_else(|| Poly::zero(x.ring()));
            if n % 2 == 1 && x.odd(i) {
                -&p
            } else {
                p
            }
        })
        .collect()
}

fn basis_xform(x: &MF, frame: &TAdicFrame, i: usize, m: usize) -> XForm {
    let mut v: XForm = vec![Form::new(); x.rank()];
    v[i] = frame.sigma(m);
    v
}

/// `e = λ_1⋯λ_n ε (H d)^n σ`, evaluated column by column with the de Rham contraction.
pub fn e_via_perturbation(x: &MF, frame: &TAdicFrame, lambdas: &[MFMap]) -> Result<MFMap> {
    check_lambdas(x, frame, lambdas)?;
    if !frame.is_graded() {
        return Err(Error::UnsupportedConnection("perturbation route needs a graded frame".into()));
    }
    let reduced = reduce_mod_t(x, frame)?;
    let n = frame.n();
    let mu = frame.mu();
    let mut lam = PMat::identity(x.ring(), x.rank());
    for l in lambdas {
        lam = lam.mul(&l.m);
    }
    let mut out = PMat::zeros(frame.base_ring(), reduced.rank(), reduced.rank());
    for i in 0..x.rank() {
        for m in 0..mu {
            let mut v = basis_xform(x, frame, i, m);
            for _ in 0..n {
                v = apply_matrix(x.d(), &v);
                v = apply_odd(x, &v, |f| frame.contraction(f))?;
            }
            let eps = epsilon(x, n, &v);
            let mut img = vec![Poly::zero(x.ring()); x.rank()];
            for (r, ir) in img.iter_mut().enumerate() {
                for (c, pc) in eps.iter().enumerate() {
                    if !pc.is_zero() && !lam.get(r, c).is_zero() {
                        *ir = &*ir + &(lam.get(r, c) * pc);
                    }
                }
            }
            for (r, p) in img.iter().enumerate() {
                for (m2, c) in frame.coords(p)?.into_iter().enumerate() {
                    out.set(r * mu + m2, i * mu + m, c);
                }
            }
        }
    }
    Ok(MFMap::new_unchecked(&reduced, &reduced, false, out))
}

/// Check `ε∘ϑ′ = 1` and that `d + δ` anticommutes with every `dt_j − λ_j`,
/// on all elements `ξ_i ⊗ σ(e_m)·dt_I`.
pub fn koszul_model_check(x: &MF, frame: &TAdicFrame, lambdas: &[MFMap]) -> Result<bool> {
    check_lambdas(x, frame, lambdas)?;
    let n = frame.n();
    let mu = frame.mu();
    let dplus = |v: &XForm| -> Result<XForm> {
        let mut a = apply_matrix(x.d(), v);
        let b = apply_odd(x, v, |f| Ok(frame.delta(f)))?;
        xform_add(&mut a, &b);
        Ok(a)
    };
    let step = |j: usize, v: &XForm| -> Result<XForm> {
        let mut a = wedge_dt(x, j, v)?;
        let b = xform_neg(&apply_matrix(&lambdas[j].m, v));
        xform_add(&mut a, &b);
        Ok(a)
    };
    for i in 0..x.rank() {
        for m in 0..mu {
            // ε∘ϑ′ on ξ_i ⊗ σ(e_m)
            let mut v = basis_xform(x, frame, i, m);
            for j in (0..n).rev() {
                v = step(j, &v)?;
            }
            let eps = epsilon(x, n, &v);
            for (r, p) in eps.iter().enumerate() {
                let want = if r == i { frame.section(m) } else { Poly::zero(x.ring()) };
                if *p != want {
                    return Ok(false);
                }
            }
            for set in 0..(1u32 << n) {
                let mut v: XForm = vec![Form::new(); x.rank()];
                v[i].insert(set, frame.section(m));
                for j in 0..n {
                    let mut a = dplus(&step(j, &v)?)?;
                    let b = step(j, &dplus(&v)?)?;
                    xform_add(&mut a, &b);
                    if a.iter().any(|f| !f.is_empty()) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Verification record for a finite model.
#[derive(Clone, Debug)]
pub struct IdempotentRecord {
    pub strict: bool,
    pub exact: bool,
    pub witness: HomotopySearch,
}

/// (a) `e d = d e`; (b) `e² − e` null-homotopic within `bound` (exactly zero counts).
pub fn check_idempotent(model: &FiniteModel, bound: u32) -> Result<IdempotentRecord> {
    let e = &model.e;
    let strict = e.is_morphism();
    let diff = e.compose(e)?.sub(e)?;
    let exact = diff.is_zero();
    let witness = if !strict {
        HomotopySearch::Inconclusive
    } else {
        find_homotopy(&diff, bound)?
    };
    Ok(IdempotentRecord { strict, exact, witness })
}

/// Cohomology of a constant factorisation of zero and the map induced by `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    /// `(dim H⁰, dim H¹)` of `X/tX`.
    pub cohomology: (usize, usize),
    /// Dimensions of the image of `H(e)` inside `H(X/tX)`.
    pub image: (usize, usize),
    /// Dimensions of the pushforward itself (the image shifted back by `n`).
    pub pushforward: (usize, usize),
    /// `H(e)` on `H⁰` and `H¹` in the chosen cohomology bases.
    pub induced: (QMat, QMat),
}

struct Cohomology {
    reps: QMat,
    boundaries: QMat,
}

/// Representatives of `ker d / im d` restricted to one parity.
fn cohomology_part(d: &QMat, part: &[usize], other: &[usize], f: Field) -> Cohomology {
    let n = part.len();
    // cycles: kernel of d restricted to columns `part`
    let dz = d.select(other, part);
    let cycles = dz.nullspace(f);
    // boundaries: image of d restricted to columns `other`, rows `part`
    let db = d.select(part, other);
    let bcols: Vec<Vec<Q>> = db.column_basis(f).iter().map(|&c| db.column(c)).collect();
    let mut all = bcols.clone();
    let nb = bcols.len();
    all.extend(cycles);
    let m = QMat::from_columns(n, &all);
    let piv = m.column_basis(f);
    let reps: Vec<Vec<Q>> = piv.iter().filter(|&&c| c >= nb).map(|&c| m.column(c)).collect();
    Cohomology {
        reps: QMat::from_columns(n, &reps),
        boundaries: QMat::from_columns(n, &bcols),
    }
}

fn induced_map(e: &QMat, h: &Cohomology, f: Field) -> Result<QMat> {
    let k = h.reps.cols();
    let nb = h.boundaries.cols();
    let basis = h.boundaries.hcat(&h.reps);
    let img = e.mul(&h.reps);
    let sol = basis
        .solve_mat(&img, f)
        .ok_or_else(|| Error::VerificationFailed("e does not preserve cycles".into()))?;
    let rows: Vec<usize> = (nb..nb + k).collect();
    let cols: Vec<usize> = (0..k).collect();
    Ok(sol.select(&rows, &cols))
}

/// Cohomology of `X/tX` over a field and the dimensions of the summand cut out by `e`.
pub fn split_over_point(model: &FiniteModel) -> Result<SplitResult> {
    let base = model.frame.base_ring();
    if base.nvars() != 0 {
        return Err(Error::BaseNotField(format!("base ring has variables {:?}", base.vars())));
    }
    let f = model.frame.field();
    let x = &model.reduced;
    let d = x
        .d()
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant differential".into()))?;
    let e = model
        .e
        .m
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant idempotent".into()))?;
    let w = x.potential();
    if !w.is_zero() {
        // d² = W ≠ 0 is invertible: the model is contractible
        let z = QMat::zeros(0, 0);
        return Ok(SplitResult {
            cohomology: (0, 0),
            image: (0, 0),
            pushforward: (0, 0),
            induced: (z.clone(), z),
        });
    }
    let ev: Vec<usize> = (0..x.r0()).collect();
    let od: Vec<usize> = (x.r0()..x.rank()).collect();
    let h0 = cohomology_part(&d, &ev, &od, f);
    let h1 = cohomology_part(&d, &od, &ev, f);
    let e0 = induced_map(&e.select(&ev, &ev), &h0, f)?;
    let e1 = induced_map(&e.select(&od, &od), &h1, f)?;
    let image = (e0.rank(f), e1.rank(f));
    let pushforward = if model.n % 2 == 1 { (image.1, image.0) } else { image };
    Ok(SplitResult {
        cohomology: (h0.reps.cols(), h1.reps.cols()),
        image,
        pushforward,
        induced: (e0, e1),
    })
}

/// The maps `H(f∘e)` on `H⁰` and `H¹` of `X/tX` for an even endomorphism `f` of
/// the constant model (over a field, `W = 0`); empty when `W ≠ 0`.
pub fn induced_on_cohomology(model: &FiniteModel, f: &QMat) -> Result<(QMat, QMat)> {
    let base = model.frame.base_ring();
    if base.nvars() != 0 {
        return Err(Error::BaseNotField(format!("base ring has variables {:?}", base.vars())));
    }
    let x = &model.reduced;
    if !x.potential().is_zero() {
        return Ok((QMat::zeros(0, 0), QMat::zeros(0, 0)));
    }
    let field = model.frame.field();
    let d = x
        .d()
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant differential".into()))?;
    let e = model
        .e
        .m
        .to_qmat()
        .ok_or_else(|| Error::BaseNotField("non-constant idempotent".into()))?;
    let fe = f.mul(&e);
    if d.mul(&fe) != fe.mul(&d) {
        return Err(Error::NotAMorphism("f∘e does not commute with the differential".into()));
    }
    let ev: Vec<usize> = (0..x.r0()).collect();
    let od: Vec<usize> = (x.r0()..x.rank()).collect();
    let h0 = cohomology_part(&d, &ev, &od, field);
    let h1 = cohomology_part(&d, &od, &ev, field);
    Ok((
        induced_map(&fe.select(&ev, &ev), &h0, field)?,
        induced_map(&fe.select(&od, &od), &h1, field)?,
    ))
}

/// Supertrace of `H(f∘e)` on `H(X/tX)`.
pub fn supertrace_on_cohomology(model: &FiniteModel, f: &QMat) -> Result<Q> {
    let (a, b) = induced_on_cohomology(model, f)?;
    Ok(a.trace() - b.trace())
}

/// Dimensions of the image of `H(f∘e)`, reported for the pushforward (parities
/// exchanged when `n` is odd).
pub fn image_dims_on_cohomology(model: &FiniteModel, f: &QMat) -> Result<(usize, usize)> {
    let (a, b) = induced_on_cohomology(model, f)?;
    let field = model.frame.field();
    let dims = (a.rank(field), b.rank(field));
    Ok(if model.n % 2 == 1 { (dims.1, dims.0) } else { dims })
}

/// Result of [`strip_units`]: the reduced factorisation and the two homotopy
/// equivalences `to: X → X′`, `from: X′ → X` with `to∘from = 1`.
#[derive(Clone, Debug)]
pub struct Stripped {
    pub reduced: MF,
    pub to: PMat,
    pub from: PMat,
}

/// Split off every rank-(1,1) summand `(u | W/u)` with `u` a nonzero constant,
/// pivoting on the first such entry in row-major order.
pub fn strip_units(x: &MF) -> Result<Stripped> {
    let ring = x.ring().clone();
    let mut d = x.d().clone();
    let mut r0 = x.r0();
    let mut keep: Vec<usize> = (0..x.rank()).collect();
    // T with d_current = T d_X T⁻¹ on the kept coordinates
    let mut t = PMat::identity(&ring, x.rank());
    let mut tinv = PMat::identity(&ring, x.rank());
    loop {
        let pivot = (0..keep.len()).find_map(|a| {
            (0..keep.len()).find_map(|b| {
                let v = d.get(keep[a], keep[b]);
                (v.is_constant() && !v.is_zero()).then_some((keep[a], keep[b]))
            })
        });
        let Some((r, c)) = pivot else { break };
        let a_inv = Q::one() / d.get(r, c).constant_term();
        // clear row r: ξ_{c'} ← ξ_{c'} − (d_{rc'}/a) ξ_c
        for &c2 in &keep {
            if c2 == c || d.get(r, c2).is_zero() {
                continue;
            }
            let k = -d.get(r, c2).scale(&a_inv);
            // d ← Q⁻¹ d Q with Q = 1 + k e_{c,c2}
            col_op(&mut d, c2, c, &k);
            row_op(&mut d, c, c2, &-&k);
            row_op(&mut t, c, c2, &-&k);
            col_op(&mut tinv, c2, c, &k);
        }
        // clear column c: row r2 ← row r2 − (d_{r2 c}/a) row r
        for &r2 in &keep {
            if r2 == r || d.get(r2, c).is_zero() {
                continue;
            }
            let k = d.get(r2, c).scale(&a_inv);
            // d ← P d P⁻¹ with P = 1 − k e_{r2,r}
            row_op(&mut d, r2, r, &-&k);
            col_op(&mut d, r, r2, &k);
            row_op(&mut t, r2, r, &-&k);
            col_op(&mut tinv, r, r2, &k);
        }
        keep.retain(|&k| k != r && k != c);
        r0 -= 1;
    }
    let reduced_d = d.select(&keep, &keep);
    let reduced = MF::from_full(x.potential(), r0, keep.len() - r0, reduced_d)?;
    let all: Vec<usize> = (0..x.rank()).collect();
    Ok(Stripped {
        reduced,
        to: t.select(&keep, &all),
        from: tinv.select(&all, &keep),
    })
}

/// column `dst` += k · column `src`.
fn col_op(m: &mut PMat, dst: usize, src: usize, k: &Poly) {
    for i in 0..m.rows() {
        let s = m.get(i, src);
        if s.is_zero() {
            continue;
        }
        let v = m.get(i, dst) + &(s * k);
        m.set(i, dst, v);
    }
}

/// row `dst` += k · row `src`.
fn row_op(m: &mut PMat, dst: usize, src: usize, k: &Poly) {
    for j in 0..m.cols() {
        let s = m.get(src, j);
        if s.is_zero() {
            continue;
        }
        let v = m.get(dst, j) + &(k * s);
        m.set(dst, j, v);
    }
}

/// Split a constant even idempotent: `Z = F d G` with `G` a basis of the image
/// and `F G = 1`, `G F = e`.
pub fn split_constant_idempotent(model: &FiniteModel) -> Result<(MF, QMat, QMat)> {
    let e = model
        .e
        .m
        .to_qmat()
        .ok_or_else(|| Error::NotConstant("idempotent has non-constant entries".into()))?;
    if e.mul(&e) != e {
        return Err(Error::VerificationFailed("e² ≠ e".into()));
    }
    let f = model.frame.field();
    let piv = e.column_basis(f);
    let g = e.select(&(0..e.rows()).collect::<Vec<_>>(), &piv);
    let c = g
        .solve_mat(&e, f)
        .ok_or_else(|| Error::VerificationFailed("image basis".into()))?;
    let x = &model.reduced;
    let ring = x.ring();
    let gp = PMat::from_qmat(ring, &g);
    let cp = PMat::from_qmat(ring, &c);
    let z = cp.mul(x.d()).mul(&gp);
    let r0 = piv.iter().filter(|&&k| k < x.r0()).count();
    Ok((MF::from_full(x.potential(), r0, piv.len() - r0, z)?, c, g))
}

/// A constant even isomorphism `P` with `P d_X = d_Y P`, if one exists.
pub fn constant_isomorphism(x: &MF, y: &MF) -> Result<Option<QMat>> {
    if x.r0() != y.r0() || x.r1() != y.r1() || x.potential() != y.potential() {
        return Ok(None);
    }
    let n = x.rank();
    let f = Field::new(x.ring().characteristic());
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| x.odd(j) == y.odd(i))
        .collect();
    // equations: coefficient of each monomial in each entry of P d_X − d_Y P
    let mut rows: std::collections::BTreeMap<(usize, usize, crate::poly::Mono), Vec<Q>> = Default::default();
    for (s, &(i, j)) in slots.iter().enumerate() {
        for c in 0..n {
            for (m, v) in x.d().get(j, c).raw_terms() {
                let e = rows.entry((i, c, m.clone())).or_insert_with(|| vec![Q::zero(); slots.len()]);
                e[s] += v;
            }
        }
        for r in 0..n {
            for (m, v) in y.d().get(r, i).raw_terms() {
                let e = rows.entry((r, j, m.clone())).or_insert_with(|| vec![Q::zero(); slots.len()]);
                e[s] -= v;
            }
        }
    }
    let a = QMat::from_rows(rows.into_values().collect());
    let ns = if a.rows() == 0 {
        (0..slots.len())
            .map(|k| (0..slots.len()).map(|l| if k == l { Q::one() } else { Q::zero() }).collect())
            .collect()
    } else {
        a.nullspace(f)
    };
    let build = |coef: &dyn Fn(usize) -> Q| -> QMat {
        let mut p = QMat::zeros(n, n);
        for (k, v) in ns.iter().enumerate() {
            let c = coef(k);
            for (s, &(i, j)) in slots.iter().enumerate() {
                let cur = p.get(i, j).clone();
                p.set(i, j, cur + &c * &v[s]);
            }
        }
        p
    };
    for attempt in 0..8i64 {
        let p = build(&|k| Q::from_integer(BigInt::from((k as i64 + 1) * (attempt + 1) % 7 + 1)));
        if p.inverse(f).is_some() {
            return Ok(Some(p));
        }
    }
    for k in 0..ns.len() {
        let p = build(&|l| if l == k { Q::one() } else { Q::zero() });
        if p.inverse(f).is_some() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::Grading;
    use crate::poly::{parse_polynomial, Ring, RingRef};

    fn p(s: &str, r: &RingRef) -> Poly {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn permutation_signs() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().map(|(_, s)| s).sum::<i64>(), 0);
        assert_eq!(ps[1], (vec![0, 2, 1], -1));
    }

    #[test]
    fn one_variable_model() {
        // Y = X ⊗ K ⊗ K∨ with K = (u | u); W = x² survives, t = u
        let r = Ring::new(&["x", "u"]).unwrap();
        let x = MF::rank_one(&p("x", &r), &p("x", &r)).unwrap();
        let k = MF::rank_one(&p("u", &r), &p("u", &r)).unwrap();
        let kd = k.dual();
        let y = x.tensor(&k).unwrap().tensor(&kd).unwrap();
        let frame = TAdicFrame::new(&r, &["u"], &[p("u", &r)], Grading::Auto).unwrap();
        let dk = kd.partial_homotopy_named("u").unwrap().scale(&crate::poly::qf(-1, 2));
        let lam = x.tensor(&k).unwrap().identity().tensor(&dk).unwrap();
        let model = idempotent(&y, &frame, std::slice::from_ref(&lam)).unwrap();
        assert!(model.strict);
        let rec = check_idempotent(&model, 4).unwrap();
        assert!(rec.strict && rec.witness.witness().is_some());
        let pert = e_via_perturbation(&y, &frame, std::slice::from_ref(&lam)).unwrap();
        assert_eq!(pert.m, model.e.m);
        assert!(koszul_model_check(&y, &frame, std::slice::from_ref(&lam)).unwrap());
        let theta = theta_map(&y, &frame, &[lam]).unwrap();
        assert!(theta.is_morphism());
    }

    #[test]
    fn strip_examples() {
        let r = Ring::new(&["x"]).unwrap();
        let triv = MF::rank_one(&p("1", &r), &p("x^3", &r)).unwrap();
        assert_eq!(strip_units(&triv).unwrap().reduced.rank(), 0);
        let x = MF::rank_one(&p("x", &r), &p("x^2", &r)).unwrap();
        let sum = x.direct_sum(&triv).unwrap();
        let s = strip_units(&sum).unwrap();
        assert_eq!(s.reduced, x);
        assert_eq!(s.to.mul(&s.from), PMat::identity(&r, 2));
        assert_eq!(s.to.mul(sum.d()), s.reduced.d().mul(&s.to));
        assert_eq!(sum.d().mul(&s.from), s.from.mul(s.reduced.d()));
    }
}
