//! Seeded random generators for property checks and the self-test.

use num_traits::{One, Zero};
use rand::Rng;

use crate::linalg::{Field, QMat};
use crate::mf::{monomials_up_to, MF};
use crate::perturb::{DeformationRetract, PerturbationType};
use crate::pmat::PMat;
use crate::poly::{q, Poly, RingRef, Q};

fn small<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(-3..=3))
}

fn nonzero<R: Rng>(rng: &mut R) -> Q {
    loop {
        let c = small(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial in the variables `vars` of total degree ≤ `max_deg`
/// with between one and `max_terms` terms and small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, ring: &RingRef, vars: &[usize], max_deg: u32, max_terms: usize) -> Poly {
    let monos = monomials_up_to(vars.len(), max_deg);
    let k = rng.gen_range(1..=max_terms.max(1));
    let mut p = Poly::zero(ring);
    for _ in 0..k {
        let m = &monos[rng.gen_range(0..monos.len())];
        let mut e = vec![0u32; ring.nvars()];
        for (j, &v) in vars.iter().enumerate() {
            e[v] = m[j];
        }
        p = &p + &Poly::monomial(ring, e, nonzero(rng));
    }
    p
}

/// Random even endomorphism of `X` with polynomial entries of degree ≤ `max_deg`.
pub fn random_even_endomorphism<R: Rng>(rng: &mut R, x: &MF, max_deg: u32, max_terms: usize) -> PMat {
    let ring = x.ring();
    let vars: Vec<usize> = (0..ring.nvars()).collect();
    let n = x.rank();
    let mut m = PMat::zeros(ring, n, n);
    for r in 0..n {
        for c in 0..n {
            if x.odd(r) == x.odd(c) {
                m.set(r, c, random_poly(rng, ring, &vars, max_deg, max_terms));
            }
        }
    }
    m
}

/// `X` conjugated by a random constant even automorphism.
pub fn random_conjugate<R: Rng>(rng: &mut R, x: &MF) -> MF {
    let g = random_even_invertible(rng, &x.parities());
    let gi = g.inverse(Field::Q).expect("invertible");
    let ring = x.ring();
    let d = PMat::from_qmat(ring, &g).mul(x.d()).mul(&PMat::from_qmat(ring, &gi));
    MF::from_full(x.potential(), x.r0(), x.r1(), d).expect("conjugate of a factorisation")
}

/// Random even invertible matrix `(1 + N_lower)(1 + N_upper)` for the given parities.
pub fn random_even_invertible<R: Rng>(rng: &mut R, parity: &[bool]) -> QMat {
    let n = parity.len();
    let mut lo = QMat::identity(n);
    let mut up = QMat::identity(n);
    for r in 0..n {
        for c in 0..n {
            if parity[r] != parity[c] || r == c {
                continue;
            }
            if r > c {
                lo.set(r, c, small(rng));
            } else {
                up.set(r, c, small(rng));
            }
        }
    }
    lo.mul(&up)
}

/// A random finite retract datum with a nilpotent perturbation satisfying the
/// side conditions of `kind`.
///
/// `M = L ⊕ C_1 ⊕ … ⊕ C_k` with each `C_j` a contractible pair at filtration
/// level `j`, `b` block-diagonal, `μ = U b U⁻¹ − b` with `U = 1 + N` and `N`
/// even and strictly lowering (into the `C` part only for type (1)), all
/// conjugated by a random even automorphism.
pub fn random_retract<R: Rng>(rng: &mut R, kind: PerturbationType) -> (DeformationRetract, QMat) {
    let w = if rng.gen_bool(0.5) { Q::zero() } else { nonzero(rng) };
    let l_pairs = rng.gen_range(0..=2);
    let c_pairs = rng.gen_range(2..=3);
    let nl = 2 * l_pairs;
    let nm = nl + 2 * c_pairs;
    let mut parity_m = Vec::new();
    let mut level = Vec::new();
    let mut b = QMat::zeros(nm, nm);
    for k in 0..l_pairs {
        // even e, odd o with b e = α o, b o = β e, αβ = W
        let (e, o) = (2 * k, 2 * k + 1);
        let (alpha, beta) = if w.is_zero() {
            if rng.gen_bool(0.5) { (Q::zero(), small(rng)) } else { (small(rng), Q::zero()) }
        } else {
            let a = nonzero(rng);
            let bb = &w / &a;
            (a, bb)
        };
        b.set(o, e, alpha);
        b.set(e, o, beta);
        parity_m.extend([false, true]);
        level.extend([0, 0]);
    }
    let mut h = QMat::zeros(nm, nm);
    for k in 0..c_pairs {
        // c, c' = b c of opposite parity, b c' = W c, h c' = −c
        let (c, cp) = (nl + 2 * k, nl + 2 * k + 1);
        let odd = rng.gen_bool(0.5);
        parity_m.extend([odd, !odd]);
        level.extend([k + 1, k + 1]);
        b.set(cp, c, Q::one());
        b.set(c, cp, w.clone());
        h.set(c, cp, -Q::one());
    }
    let parity_l: Vec<bool> = parity_m[..nl].to_vec();
    let mut i = QMat::zeros(nm, nl);
    for k in 0..nl {
        i.set(k, k, Q::one());
    }
    let p = i.transpose();
    let b_l = b.select(&(0..nl).collect::<Vec<_>>(), &(0..nl).collect::<Vec<_>>());

    let mut n = QMat::zeros(nm, nm);
    for r in 0..nm {
        for c in 0..nm {
            if parity_m[r] != parity_m[c] || level[r] >= level[c] {
                continue;
            }
            if kind == PerturbationType::One && r < nl {
                continue;
            }
            n.set(r, c, small(rng));
        }
    }
    let u = QMat::identity(nm).add(&n);
    let uinv = u.inverse(Field::Q).expect("unipotent");
    let mu = u.mul(&b).mul(&uinv).sub(&b);

    let pm = random_even_invertible(rng, &parity_m);
    let pminv = pm.inverse(Field::Q).expect("invertible");
    let conj = |x: &QMat| pm.mul(x).mul(&pminv);
    let datum = DeformationRetract {
        parity_l,
        b_l,
        b_m: conj(&b),
        i: pm.mul(&i),
        p: p.mul(&pminv),
        h: conj(&h),
        parity_m,
        curvature: w,
    };
    (datum, conj(&mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_data_perturbs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in [PerturbationType::One, PerturbationType::Two] {
            for _ in 0..10 {
                let (d, mu) = random_retract(&mut rng, kind);
                d.verify().unwrap();
                let out = d.perturb(&mu, kind, 16).unwrap();
                if kind == PerturbationType::One {
                    assert_eq!(out.p, d.p);
                    assert_eq!(out.b_l, d.b_l);
                }
            }
        }
    }
}
