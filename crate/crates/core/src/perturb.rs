//! Finite deformation retract data of linear factorisations and the
//! homological perturbation lemma.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::Q;

/// Side conditions under which the perturbation lemma is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbationType {
    /// `pμ = 0`, `ph = 0` and the curvature is unchanged.
    One,
    /// `h² = 0`, `hi = 0`, `ph = 0`.
    Two,
}

/// `(L, b_L) ⇄ (M, b_M)` with `p∘i = 1` and `i∘p = 1 + b_M h + h b_M`.
/// Parities are `true` for odd basis vectors; `b² = curvature·1` on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationRetract {
    pub parity_l: Vec<bool>,
    pub parity_m: Vec<bool>,
    pub b_l: QMat,
    pub b_m: QMat,
    pub i: QMat,
    pub p: QMat,
    pub h: QMat,
    pub curvature: Q,
}

fn has_parity(m: &QMat, rows: &[bool], cols: &[bool], odd: bool) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c).is_zero() || (rows[r] ^ cols[c]) == odd))
}

fn scalar(n: usize, c: &Q) -> QMat {
    QMat::identity(n).scale(c)
}

impl DeformationRetract {
    pub fn dim_l(&self) -> usize {
        self.parity_l.len()
    }

    pub fn dim_m(&self) -> usize {
        self.parity_m.len()
    }

    /// Every retract identity, reported as the first failure.
    pub fn verify(&self) -> Result<()> {
        let (nl, nm) = (self.dim_l(), self.dim_m());
        let shapes = [
            (&self.b_l, nl, nl, "b_L"),
            (&self.b_m, nm, nm, "b_M"),
            (&self.i, nm, nl, "i"),
            (&self.p, nl, nm, "p"),
            (&self.h, nm, nm, "h"),
        ];
        for (m, r, c, name) in shapes {
            if m.rows() != r || m.cols() != c {
                return Err(Error::ShapeMismatch(format!("{name} is {}x{}, expected {r}x{c}", m.rows(), m.cols())));
            }
        }
        let (pl, pm) = (&self.parity_l, &self.parity_m);
        let parities = [
            (has_parity(&self.b_l, pl, pl, true), "b_L is not odd"),
            (has_parity(&self.b_m, pm, pm, true), "b_M is not odd"),
            (has_parity(&self.i, pm, pl, false), "i is not even"),
            (has_parity(&self.p, pl, pm, false), "p is not even"),
            (has_parity(&self.h, pm, pm, true), "h is not odd"),
        ];
        for (ok, msg) in parities {
            if !ok {
                return Err(Error::VerificationFailed(msg.into()));
            }
        }
        let checks = [
            (self.b_l.mul(&self.b_l) == scalar(nl, &self.curvature), "b_L² ≠ W"),
            (self.b_m.mul(&self.b_m) == scalar(nm, &self.curvature), "b_M² ≠ W"),
            (self.b_m.mul(&self.i) == self.i.mul(&self.b_l), "i is not a chain map"),
            (self.p.mul(&self.b_m) == self.b_l.mul(&self.p), "p is not a chain map"),
            (self.p.mul(&self.i) == QMat::identity(nl), "p∘i ≠ 1"),
            (
                self.i.mul(&self.p)
                    == QMat::identity(nm)
                        .add(&self.b_m.mul(&self.h))
                        .add(&self.h.mul(&self.b_m)),
                "i∘p ≠ 1 + bh + hb",
            ),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::HomotopyIdentityFailed(msg.into()));
            }
        }
        Ok(())
    }

    /// `h² = 0`, `hi = 0`, `ph = 0`.
    pub fn side_conditions(&self) -> bool {
        self.h.mul(&self.h).is_zero() && self.h.mul(&self.i).is_zero() && self.p.mul(&self.h).is_zero()
    }

    /// Perturb `b_M` by the odd map `μ`, requiring `(μh)^k = 0` for some `k ≤ bound`.
    pub fn perturb(&self, mu: &QMat, kind: PerturbationType, bound: usize) -> Result<DeformationRetract> {
        perturb_retract(self, mu, kind, bound)
    }
}

/// The homological perturbation lemma: with `A = Σ (μh)^n μ`,
/// `i∞ = i + hAi`, `p∞ = p + pAh`, `h∞ = h + hAh`, `b∞ = b + pAi`.
pub fn perturb_retract(
    datum: &DeformationRetract,
    mu: &QMat,
    kind: PerturbationType,
    bound: usize,
) -> Result<DeformationRetract> {
    let nm = datum.dim_m();
    if mu.rows() != nm || mu.cols() != nm {
        return Err(Error::ShapeMismatch(format!("perturbation is {}x{}, expected {nm}x{nm}", mu.rows(), mu.cols())));
    }
    if !has_parity(mu, &datum.parity_m, &datum.parity_m, true) {
        return Err(Error::VerificationFailed("perturbation is not odd".into()));
    }
    let perturbed = datum.b_m.add(mu);
    let b2 = perturbed.mul(&perturbed);
    let curvature = if nm == 0 { datum.curvature.clone() } else { b2.get(0, 0).clone() };
    if b2 != scalar(nm, &curvature) {
        return Err(Error::VerificationFailed("(b + μ)² is not scalar".into()));
    }
    match kind {
        PerturbationType::One => {
            if !datum.p.mul(mu).is_zero() {
                return Err(Error::SideConditionsViolated("pμ ≠ 0".into()));
            }
            if !datum.p.mul(&datum.h).is_zero() {
                return Err(Error::SideConditionsViolated("ph ≠ 0".into()));
            }
            if curvature != datum.curvature {
                return Err(Error::SideConditionsViolated("curvature changed".into()));
            }
        }
        PerturbationType::Two => {
            if !datum.side_conditions() {
                return Err(Error::SideConditionsViolated("h² = hi = ph = 0 fails".into()));
            }
        }
    }
    let muh = mu.mul(&datum.h);
    let mut power = QMat::identity(nm);
    let mut sum = QMat::zeros(nm, nm);
    let mut nilpotent = false;
    for _ in 0..=bound {
        if power.is_zero() {
            nilpotent = true;
            break;
        }
        sum = sum.add(&power);
        power = power.mul(&muh);
    }
    if !nilpotent {
        return Err(Error::PerturbationNotSmall(bound));
    }
    let a = sum.mul(mu);
    let (i, p, h) = (&datum.i, &datum.p, &datum.h);
    let out = DeformationRetract {
        parity_l: datum.parity_l.clone(),
        parity_m: datum.parity_m.clone(),
        b_l: datum.b_l.add(&p.mul(&a).mul(i)),
        b_m: perturbed,
        i: i.add(&h.mul(&a).mul(i)),
        p: p.add(&p.mul(&a).mul(h)),
        h: h.add(&h.mul(&a).mul(h)),
        curvature,
    };
    out.verify()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    /// L = (k | k) with b = [[0,1],[W,0]], plus one contractible pair.
    fn small() -> DeformationRetract {
        let w = q(2);
        let b_l = QMat::from_rows(vec![vec![q(0), q(1)], vec![w.clone(), q(0)]]);
        let mut b_m = QMat::zeros(4, 4);
        b_m.set(0, 1, q(1));
        b_m.set(1, 0, w.clone());
        b_m.set(3, 2, q(1));
        b_m.set(2, 3, w.clone());
        let mut h = QMat::zeros(4, 4);
        h.set(2, 3, -q(1));
        let i = QMat::from_rows(vec![
            vec![q(1), q(0)],
            vec![q(0), q(1)],
            vec![q(0), q(0)],
            vec![q(0), q(0)],
        ]);
        DeformationRetract {
            parity_l: vec![false, true],
            parity_m: vec![false, true, false, true],
            b_l,
            b_m,
            p: i.transpose(),
            i,
            h,
            curvature: w,
        }
    }

    #[test]
    fn identities_and_zero_perturbation() {
        let d = small();
        d.verify().unwrap();
        assert!(d.side_conditions());
        let same = d.perturb(&QMat::zeros(4, 4), PerturbationType::Two, 3).unwrap();
        assert_eq!(same, d);
    }

    #[test]
    fn side_condition_errors() {
        let d = small();
        let mut mu = QMat::zeros(4, 4);
        mu.set(0, 3, q(1));
        assert!(matches!(
            d.perturb(&mu, PerturbationType::One, 3),
            Err(Error::SideConditionsViolated(_)) | Err(Error::VerificationFailed(_))
        ));
    }
}
