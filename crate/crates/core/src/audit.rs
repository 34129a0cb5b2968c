//! Step-by-step replay of the identity chain built on `S = (H + J)/(n + √n)`.
//!
//! Every identity is evaluated exactly on circulant first rows. The chain is
//!
//! ```text
//! acheS      H  = 2h(2h+1) S  - J
//! acheStar   H* = 2h(2h+1) S* - J
//! defH       n I = H H*
//! SJ, SstarJ S J = J,  S* J = J
//! JJ         J^2 = n J
//! C1         4h^2 I = 4h^2 (2h+1)^2 S S* - 2h(2h+1)(S + S*) J + 4h^2 J
//! C2         4h I   = 4h (2h+1)^2 S S* - 4(2h+1) J + 4h J
//! C3         0 = -4J (mod h)
//! C4         h | 4
//! C5         h = 1
//! ```
//!
//! Reducing C2 modulo `h` needs the entries of `4h(2h+1)^2 S S*` to be
//! integers (or, in extended mode, to have denominators coprime to `h`).
//! That precondition is reported as its own step. The auditor only records
//! verdicts; it draws no conclusion beyond them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circulant::{format_rational, integer, ratio_str, CirculantMatrix, Rational};
use crate::hadamard::{build_s, is_hadamard, normalize_sign, regular_profile, SignVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepId {
    #[serde(rename = "acheS")]
    AcheS,
    #[serde(rename = "acheStar")]
    AcheStar,
    #[serde(rename = "defH")]
    DefH,
    #[serde(rename = "SJ")]
    SJ,
    #[serde(rename = "SstarJ")]
    SstarJ,
    #[serde(rename = "JJ")]
    JJ,
    C1,
    C2,
    #[serde(rename = "C3-integrality")]
    C3Integrality,
    #[serde(rename = "C3-congruence")]
    C3Congruence,
    C4,
    C5,
}

impl StepId {
    pub const CHAIN: [StepId; 12] = [
        StepId::AcheS,
        StepId::AcheStar,
        StepId::DefH,
        StepId::SJ,
        StepId::SstarJ,
        StepId::JJ,
        StepId::C1,
        StepId::C2,
        StepId::C3Integrality,
        StepId::C3Congruence,
        StepId::C4,
        StepId::C5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepId::AcheS => "acheS",
            StepId::AcheStar => "acheStar",
            StepId::DefH => "defH",
            StepId::SJ => "SJ",
            StepId::SstarJ => "SstarJ",
            StepId::JJ => "JJ",
            StepId::C1 => "C1",
            StepId::C2 => "C2",
            StepId::C3Integrality => "C3-integrality",
            StepId::C3Congruence => "C3-congruence",
            StepId::C4 => "C4",
            StepId::C5 => "C5",
        }
    }
}

impl fmt::Display for StepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsExactly,
    IntegralitySatisfied,
    IntegralityViolated,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsExactly => "holds-exactly",
            Verdict::IntegralitySatisfied => "integrality-satisfied",
            Verdict::IntegralityViolated => "integrality-violated",
            Verdict::Fails => "fails",
        }
    }

    pub fn needs_witness(self) -> bool {
        matches!(self, Verdict::Fails | Verdict::IntegralityViolated)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First offending entry of a failed step. `entry` is the `(row, column)`
/// position in the materialized matrix when the step compares matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub entry: Option<(usize, usize)>,
    pub lhs: String,
    pub rhs: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditStep {
    pub step_id: StepId,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl AuditStep {
    fn pass(step_id: StepId, verdict: Verdict) -> Self {
        debug_assert!(!verdict.needs_witness());
        Self {
            step_id,
            verdict,
            witness: None,
        }
    }

    fn fail(step_id: StepId, verdict: Verdict, witness: Witness) -> Self {
        Self {
            step_id,
            verdict,
            witness: Some(witness),
        }
    }

    pub fn holds(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::HoldsExactly | Verdict::IntegralitySatisfied
        )
    }
}

/// How the modular reduction treats non-integer entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditMode {
    /// Congruences are taken on integer entries only.
    #[default]
    Strict,
    /// A rational `p/q` with `gcd(q, h) = 1` reduces to `p * q^-1 mod h`.
    Extended,
}

impl std::str::FromStr for AuditMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(AuditMode::Strict),
            "extended" => Ok(AuditMode::Extended),
            other => Err(Error::InvalidInput(format!("unknown audit mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub input_row: SignVector,
    /// `√n / 2`; a positive integer for `n = 4h^2`, and `1/2` at order 1.
    #[serde(with = "ratio_str")]
    pub h: Rational,
    pub mode: AuditMode,
    pub steps: Vec<AuditStep>,
    pub conclusion: String,
}

/// The matrices the chain is evaluated on: `H`, `S` and the scalar `h`.
#[derive(Debug, Clone)]
pub struct AuditInstance {
    n: usize,
    h: Rational,
    h_mat: CirculantMatrix,
    s: CirculantMatrix,
}

fn first_mismatch(
    lhs: &CirculantMatrix,
    rhs: &CirculantMatrix,
) -> Option<(usize, Rational, Rational)> {
    lhs.first_row()
        .iter()
        .zip(rhs.first_row())
        .position(|(a, b)| a != b)
        .map(|j| (j, lhs.first_row()[j].clone(), rhs.first_row()[j].clone()))
}

fn compare(step_id: StepId, lhs: &CirculantMatrix, rhs: &CirculantMatrix) -> AuditStep {
    match first_mismatch(lhs, rhs) {
        None => AuditStep::pass(step_id, Verdict::HoldsExactly),
        Some((j, l, r)) => AuditStep::fail(
            step_id,
            Verdict::Fails,
            Witness {
                entry: Some((0, j)),
                lhs: format_rational(&l),
                rhs: format_rational(&r),
                detail: format!("left and right sides differ at entry (0, {j})"),
            },
        ),
    }
}

/// `x mod m` in `[0, m)` for a rational whose denominator is invertible
/// modulo `m`. `None` when it is not.
fn residue(x: &Rational, m: &BigInt) -> Option<BigInt> {
    let p = x.numer().mod_floor(m);
    let q = x.denom().mod_floor(m);
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = q.extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some((p * ext.x).mod_floor(m))
}

impl AuditInstance {
    /// Instance for a normalized circulant Hadamard row.
    pub fn from_row(row: &SignVector) -> Result<Self> {
        if !is_hadamard(row) {
            return Err(Error::Precondition(format!("circ({row}) is not Hadamard")));
        }
        if normalize_sign(row)? != *row {
            return Err(Error::Precondition(format!(
                "row ({row}) is not normalized: its sum must be +2h (apply normalize_sign)"
            )));
        }
        let h = if row.len() == 1 {
            Rational::new(BigInt::one(), BigInt::from(2))
        } else {
            let profile = regular_profile(row).ok_or_else(|| {
                Error::Precondition(format!("circ({row}) has no regular profile"))
            })?;
            integer(profile.h as i64)
        };
        Ok(Self {
            n: row.len(),
            h,
            h_mat: row.to_circulant(),
            s: build_s(row)?,
        })
    }

    /// Forces a row past the Hadamard gate, building
    /// `S = (H + J) / (2(2h^2 + h))` with the declared `h`.
    pub fn forced(row: &SignVector, h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidInput("h must be positive".into()));
        }
        let n = row.len();
        let h = integer(h as i64);
        let divisor = integer(2) * (integer(2) * &h * &h + &h);
        let s = row
            .to_circulant()
            .add(&CirculantMatrix::all_ones(n)?)?
            .scale(&(Rational::one() / divisor));
        Ok(Self {
            n,
            h,
            h_mat: row.to_circulant(),
            s,
        })
    }

    /// What-if instance from a supplied `S` and declared `h`; `H` is taken
    /// to be `2h(2h+1) S - J`.
    pub fn what_if(s: CirculantMatrix, h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidInput("h must be positive".into()));
        }
        let n = s.order();
        let h = integer(h as i64);
        let h_mat = s
            .scale(&Self::scale_of(&h))
            .sub(&CirculantMatrix::all_ones(n)?)?;
        Ok(Self { n, h, h_mat, s })
    }

    fn scale_of(h: &Rational) -> Rational {
        integer(2) * h * (integer(2) * h + integer(1))
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn s(&self) -> &CirculantMatrix {
        &self.s
    }

    fn j(&self) -> CirculantMatrix {
        CirculantMatrix::all_ones(self.n).expect("order >= 1")
    }

    fn i(&self) -> CirculantMatrix {
        CirculantMatrix::identity(self.n).expect("order >= 1")
    }

    /// Integer modulus for the reduction step: `h` itself, or 1 when `h` is
    /// not an integer (order 1).
    fn modulus(&self) -> BigInt {
        if self.h.is_integer() {
            self.h.to_integer()
        } else {
            BigInt::one()
        }
    }

    /// `acheS` and `acheStar`.
    pub fn reconstruction(&self) -> [AuditStep; 2] {
        let c = Self::scale_of(&self.h);
        let j = self.j();
        let rebuilt = self.s.scale(&c).sub(&j).expect("same order");
        let rebuilt_star = self
            .s
            .conj_transpose()
            .scale(&c)
            .sub(&j)
            .expect("same order");
        [
            compare(StepId::AcheS, &self.h_mat, &rebuilt),
            compare(
                StepId::AcheStar,
                &self.h_mat.conj_transpose(),
                &rebuilt_star,
            ),
        ]
    }

    pub fn def_h(&self) -> AuditStep {
        let lhs = self.i().scale(&integer(self.n as i64));
        let rhs = self
            .h_mat
            .mul(&self.h_mat.conj_transpose())
            .expect("same order");
        compare(StepId::DefH, &lhs, &rhs)
    }

    /// `SJ`, `SstarJ` and `JJ`.
    pub fn auxiliary(&self) -> [AuditStep; 3] {
        let j = self.j();
        let sj = self.s.mul(&j).expect("same order");
        let s_star_j = self.s.conj_transpose().mul(&j).expect("same order");
        let jj = j.mul(&j).expect("same order");
        [
            compare(StepId::SJ, &sj, &j),
            compare(StepId::SstarJ, &s_star_j, &j),
            compare(StepId::JJ, &jj, &j.scale(&integer(self.n as i64))),
        ]
    }

    fn s_s_star(&self) -> CirculantMatrix {
        self.s.mul(&self.s.conj_transpose()).expect("same order")
    }

    /// Both sides of C1.
    pub fn c1_sides(&self) -> (CirculantMatrix, CirculantMatrix) {
        let h = &self.h;
        let two_h_plus_1 = integer(2) * h + integer(1);
        let four_h2 = integer(4) * h * h;
        let j = self.j();
        let lhs = self.i().scale(&four_h2);
        let quad = self
            .s_s_star()
            .scale(&(&four_h2 * &two_h_plus_1 * &two_h_plus_1));
        let cross = self
            .s
            .add(&self.s.conj_transpose())
            .and_then(|m| m.mul(&j))
            .expect("same order")
            .scale(&(integer(2) * h * &two_h_plus_1));
        let rhs = quad
            .sub(&cross)
            .and_then(|m| m.add(&j.scale(&four_h2)))
            .expect("same order");
        (lhs, rhs)
    }

    pub fn c1(&self) -> AuditStep {
        let (lhs, rhs) = self.c1_sides();
        compare(StepId::C1, &lhs, &rhs)
    }

    /// The term `4h(2h+1)^2 S S*` whose reduction modulo `h` the chain
    /// drops.
    pub fn quadratic_term(&self) -> CirculantMatrix {
        let h = &self.h;
        let two_h_plus_1 = integer(2) * h + integer(1);
        self.s_s_star()
            .scale(&(integer(4) * h * &two_h_plus_1 * &two_h_plus_1))
    }

    /// Both sides of C2.
    pub fn c2_sides(&self) -> (CirculantMatrix, CirculantMatrix) {
        let h = &self.h;
        let j = self.j();
        let lhs = self.i().scale(&(integer(4) * h));
        let linear = integer(4) * h - integer(4) * (integer(2) * h + integer(1));
        let rhs = self
            .quadratic_term()
            .add(&j.scale(&linear))
            .expect("same order");
        (lhs, rhs)
    }

    pub fn c2(&self) -> AuditStep {
        let (lhs, rhs) = self.c2_sides();
        compare(StepId::C2, &lhs, &rhs)
    }

    /// `C3-integrality`, `C3-congruence`, `C4` and `C5`.
    pub fn modular_step(&self, mode: AuditMode) -> [AuditStep; 4] {
        let m = self.modulus();
        let term = self.quadratic_term();

        let bad_entry = term.first_row().iter().position(|x| match mode {
            AuditMode::Strict => !x.is_integer(),
            AuditMode::Extended => residue(x, &m).is_none(),
        });
        let integrality = match bad_entry {
            None => AuditStep::pass(StepId::C3Integrality, Verdict::IntegralitySatisfied),
            Some(j) => AuditStep::fail(
                StepId::C3Integrality,
                Verdict::IntegralityViolated,
                Witness {
                    entry: Some((0, j)),
                    lhs: format_rational(&term.first_row()[j]),
                    rhs: format!("mod {m}"),
                    detail: match mode {
                        AuditMode::Strict => {
                            format!("entry of 4h(2h+1)^2 S S* is not an integer; reduction mod {m} undefined")
                        }
                        AuditMode::Extended => format!(
                            "entry of 4h(2h+1)^2 S S* has a denominator sharing a factor with {m}"
                        ),
                    },
                },
            ),
        };

        let congruence = match &integrality.witness {
            Some(w) => AuditStep::fail(
                StepId::C3Congruence,
                Verdict::IntegralityViolated,
                Witness {
                    detail: format!("not evaluated: {}", w.detail),
                    ..w.clone()
                },
            ),
            None => self.congruence(&m),
        };

        let c4 = if (BigInt::from(4) % &m).is_zero() {
            AuditStep::pass(StepId::C4, Verdict::HoldsExactly)
        } else {
            AuditStep::fail(
                StepId::C4,
                Verdict::Fails,
                Witness {
                    entry: None,
                    lhs: "4".into(),
                    rhs: m.to_string(),
                    detail: format!("4 mod {m} = {}", BigInt::from(4) % &m),
                },
            )
        };
        let c5 = if m.is_one() {
            AuditStep::pass(StepId::C5, Verdict::HoldsExactly)
        } else {
            AuditStep::fail(
                StepId::C5,
                Verdict::Fails,
                Witness {
                    entry: None,
                    lhs: m.to_string(),
                    rhs: "1".into(),
                    detail: format!("h = {m}"),
                },
            )
        };
        [integrality, congruence, c4, c5]
    }

    /// Reduces both sides of C2 entrywise modulo `m` and checks that the
    /// right side reduces to `-4J` and that `0 ≡ -4J`.
    fn congruence(&self, m: &BigInt) -> AuditStep {
        let (lhs, rhs) = self.c2_sides();
        let displayed = self.j().scale(&integer(-4));
        for j in 0..self.n {
            let red = |x: &Rational| residue(x, m).expect("integrality checked");
            let (l, r, d) = (
                red(&lhs.first_row()[j]),
                red(&rhs.first_row()[j]),
                red(&displayed.first_row()[j]),
            );
            let failure = if l != r {
                Some(("sides of C2 disagree", l.to_string(), r.to_string()))
            } else if r != d {
                Some((
                    "right side of C2 does not reduce to -4J",
                    r.to_string(),
                    d.to_string(),
                ))
            } else if !d.is_zero() {
                Some(("0 ≢ -4J", "0".to_string(), d.to_string()))
            } else {
                None
            };
            if let Some((what, a, b)) = failure {
                return AuditStep::fail(
                    StepId::C3Congruence,
                    Verdict::Fails,
                    Witness {
                        entry: Some((0, j)),
                        lhs: a,
                        rhs: b,
                        detail: format!("{what} modulo {m}"),
                    },
                );
            }
        }
        AuditStep::pass(StepId::C3Congruence, Verdict::HoldsExactly)
    }

    /// Every step, in chain order.
    pub fn all_steps(&self, mode: AuditMode) -> Vec<AuditStep> {
        let mut steps = Vec::with_capacity(StepId::CHAIN.len());
        steps.extend(self.reconstruction());
        steps.push(self.def_h());
        steps.extend(self.auxiliary());
        steps.push(self.c1());
        steps.push(self.c2());
        steps.extend(self.modular_step(mode));
        steps
    }
}

/// `acheS` and `acheStar` for a normalized circulant Hadamard row.
pub fn check_reconstruction(row: &SignVector) -> Result<[AuditStep; 2]> {
    Ok(AuditInstance::from_row(row)?.reconstruction())
}

pub fn check_c1(row: &SignVector) -> Result<AuditStep> {
    Ok(AuditInstance::from_row(row)?.c1())
}

pub fn check_c2(row: &SignVector) -> Result<AuditStep> {
    Ok(AuditInstance::from_row(row)?.c2())
}

pub fn check_modular_step(row: &SignVector, mode: AuditMode) -> Result<[AuditStep; 4]> {
    Ok(AuditInstance::from_row(row)?.modular_step(mode))
}

fn conclusion(n: usize, h: &Rational, steps: &[AuditStep]) -> String {
    let identities = &steps[..8];
    let held = identities
        .iter()
        .filter(|s| s.verdict == Verdict::HoldsExactly)
        .count();
    let mut text = format!(
        "order {n}, h = {}: {held} of {} identity steps hold exactly",
        format_rational(h),
        identities.len()
    );
    let failed: Vec<_> = identities
        .iter()
        .filter(|s| !s.holds())
        .map(|s| s.step_id.as_str())
        .collect();
    if !failed.is_empty() {
        text.push_str(&format!(" (failing: {})", failed.join(", ")));
    }
    for step in &steps[8..] {
        text.push_str(&format!("; {} {}", step.step_id, step.verdict));
    }
    if !h.is_integer() {
        text.push_str("; h is not an integer at this order, reductions use modulus 1");
    }
    text
}

/// Normalizes the sign of `row` and runs the whole chain on it.
pub fn full_audit(row: &SignVector, mode: AuditMode) -> Result<AuditReport> {
    let normalized = normalize_sign(row)
        .map_err(|_| Error::Precondition(format!("circ({row}) is not Hadamard")))?;
    if !is_hadamard(&normalized) {
        return Err(Error::Precondition(format!("circ({row}) is not Hadamard")));
    }
    let instance = AuditInstance::from_row(&normalized)?;
    let steps = instance.all_steps(mode);
    let conclusion = conclusion(row.len(), instance.h(), &steps);
    Ok(AuditReport {
        input_row: row.clone(),
        h: instance.h,
        mode,
        steps,
        conclusion,
    })
}

/// Chain verdicts for a what-if instance (`S` supplied, `h` declared).
pub fn audit_what_if(s: CirculantMatrix, h: u64, mode: AuditMode) -> Result<Vec<AuditStep>> {
    Ok(AuditInstance::what_if(s, h)?.all_steps(mode))
}

/// Small helper for re-checking witnesses: the value of the named entry of a
/// circulant.
pub fn entry_value(m: &CirculantMatrix, entry: (usize, usize)) -> String {
    format_rational(m.entry(entry.0, entry.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::rational;
    use crate::hadamard::catalog;

    fn sv(v: &[i8]) -> SignVector {
        SignVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reconstruction_examples() {
        let [a, b] = check_reconstruction(&sv(&[-1, 1, 1, 1])).unwrap();
        assert_eq!(
            (a.step_id, a.verdict),
            (StepId::AcheS, Verdict::HoldsExactly)
        );
        assert_eq!(
            (b.step_id, b.verdict),
            (StepId::AcheStar, Verdict::HoldsExactly)
        );

        let [a, b] = check_reconstruction(&sv(&[1])).unwrap();
        assert!(a.holds() && b.holds());

        assert!(matches!(
            check_reconstruction(&sv(&[1, 1, 1, 1])),
            Err(Error::Precondition(_))
        ));
        // Hadamard but not normalized.
        assert!(matches!(
            check_reconstruction(&sv(&[1, -1, -1, -1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn c1_and_auxiliaries() {
        let row = sv(&[-1, 1, 1, 1]);
        assert_eq!(check_c1(&row).unwrap().verdict, Verdict::HoldsExactly);
        let inst = AuditInstance::from_row(&row).unwrap();
        let third = rational(1, 3);
        assert_eq!(
            inst.s().first_row(),
            &[Rational::zero(), third.clone(), third.clone(), third]
        );
        for step in inst.auxiliary() {
            assert_eq!(step.verdict, Verdict::HoldsExactly, "{step:?}");
        }
    }

    #[test]
    fn c2_and_scaling_consistency() {
        let row = sv(&[-1, 1, 1, 1]);
        assert_eq!(check_c2(&row).unwrap().verdict, Verdict::HoldsExactly);
        let inst = AuditInstance::from_row(&row).unwrap();
        let (c1_lhs, _) = inst.c1_sides();
        let (c2_lhs, _) = inst.c2_sides();
        assert_eq!(c2_lhs.scale(inst.h()), c1_lhs);
    }

    #[test]
    fn c2_fails_with_witness_when_forced() {
        let inst = AuditInstance::forced(&sv(&[1, 1, 1, 1]), 1).unwrap();
        let step = inst.c2();
        assert_eq!(step.verdict, Verdict::Fails);
        let w = step.witness.as_ref().unwrap();
        let (lhs, rhs) = inst.c2_sides();
        let entry = w.entry.unwrap();
        assert_eq!(entry_value(&lhs, entry), w.lhs);
        assert_eq!(entry_value(&rhs, entry), w.rhs);
        assert_eq!(inst.def_h().verdict, Verdict::Fails);
    }

    #[test]
    fn modular_step_at_h1() {
        let steps = check_modular_step(&sv(&[-1, 1, 1, 1]), AuditMode::Strict).unwrap();
        let verdicts: Vec<_> = steps.iter().map(|s| s.verdict).collect();
        assert_eq!(
            verdicts,
            [
                Verdict::IntegralitySatisfied,
                Verdict::HoldsExactly,
                Verdict::HoldsExactly,
                Verdict::HoldsExactly
            ]
        );
        // S S* = circ(1/3, 2/9, 2/9, 2/9), times 36.
        let inst = AuditInstance::from_row(&sv(&[-1, 1, 1, 1])).unwrap();
        assert_eq!(
            inst.quadratic_term(),
            CirculantMatrix::from_integers(&[12, 8, 8, 8]).unwrap()
        );
    }

    #[test]
    fn order_one_degenerates() {
        let report = full_audit(&sv(&[-1]), AuditMode::Strict).unwrap();
        assert_eq!(report.h, rational(1, 2));
        assert!(report.steps.iter().all(AuditStep::holds), "{report:?}");
    }

    #[test]
    fn what_if_integrality_violated_at_h3() {
        // S = J/36 is doubly stochastic but the quadratic term is 49/3 J.
        let s = CirculantMatrix::all_ones(36)
            .unwrap()
            .scale(&rational(1, 36));
        let steps = audit_what_if(s.clone(), 3, AuditMode::Strict).unwrap();
        let by_id = |id| steps.iter().find(|s| s.step_id == id).unwrap();
        assert_eq!(by_id(StepId::SJ).verdict, Verdict::HoldsExactly);
        let integ = by_id(StepId::C3Integrality);
        assert_eq!(integ.verdict, Verdict::IntegralityViolated);
        assert_eq!(integ.witness.as_ref().unwrap().lhs, "49/3");
        assert_eq!(
            by_id(StepId::C3Congruence).verdict,
            Verdict::IntegralityViolated
        );
        assert!(by_id(StepId::C3Congruence).witness.is_some());
        assert_eq!(by_id(StepId::C4).verdict, Verdict::Fails);
        assert_eq!(by_id(StepId::C5).verdict, Verdict::Fails);

        // Denominator 3 shares a factor with h = 3, so extended mode agrees.
        let steps = audit_what_if(s, 3, AuditMode::Extended).unwrap();
        assert_eq!(steps[8].verdict, Verdict::IntegralityViolated);
    }

    #[test]
    fn what_if_extended_mode_accepts_coprime_denominators() {
        let s = CirculantMatrix::new(vec![
            rational(1, 2),
            rational(1, 2),
            Rational::zero(),
            Rational::zero(),
        ])
        .unwrap();
        let strict = audit_what_if(s.clone(), 5, AuditMode::Strict).unwrap();
        let extended = audit_what_if(s.clone(), 5, AuditMode::Extended).unwrap();
        let inst = AuditInstance::what_if(s, 5).unwrap();
        // 2420 * circ(1/2, 1/4, 0, 1/4)
        assert!(inst.quadratic_term().is_integral());
        assert_eq!(strict[8].verdict, Verdict::IntegralitySatisfied);
        assert_eq!(extended[8].verdict, Verdict::IntegralitySatisfied);
        // C2 itself fails here, and so does its reduction mod 5.
        assert_eq!(strict[9].verdict, Verdict::Fails);

        let s =
            CirculantMatrix::new(vec![rational(1, 3), rational(2, 3), Rational::zero()]).unwrap();
        // S S* = circ(5/9, 2/9, 2/9); 200 * 5/9 is not integral but 9 is
        // invertible mod 2.
        let strict = audit_what_if(s.clone(), 2, AuditMode::Strict).unwrap();
        let extended = audit_what_if(s, 2, AuditMode::Extended).unwrap();
        assert_eq!(strict[8].verdict, Verdict::IntegralityViolated);
        assert_eq!(extended[8].verdict, Verdict::IntegralitySatisfied);
        assert_ne!(extended[9].verdict, Verdict::IntegralityViolated);
    }

    #[test]
    fn residues() {
        let m = BigInt::from(5);
        assert_eq!(residue(&rational(-4, 1), &m), Some(BigInt::from(1)));
        assert_eq!(residue(&rational(1, 2), &m), Some(BigInt::from(3)));
        assert_eq!(residue(&rational(1, 5), &m), None);
        assert_eq!(
            residue(&rational(7, 10), &BigInt::one()),
            Some(BigInt::zero())
        );
    }

    #[test]
    fn full_audit_catalog() {
        for entry in catalog().iter().filter(|e| e.order == 4) {
            let report = full_audit(&entry.first_row, AuditMode::Strict).unwrap();
            let ids: Vec<_> = report.steps.iter().map(|s| s.step_id).collect();
            assert_eq!(ids, StepId::CHAIN);
            for step in &report.steps[..8] {
                assert_eq!(
                    step.verdict,
                    Verdict::HoldsExactly,
                    "{} {step:?}",
                    entry.name
                );
            }
            assert_eq!(
                report,
                full_audit(&entry.first_row, AuditMode::Strict).unwrap()
            );
        }
        assert!(full_audit(&sv(&[1, 1, 1, 1]), AuditMode::Strict).is_err());
        assert!(full_audit(&sv(&[1, 1, -1, -1]), AuditMode::Strict).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let report = full_audit(&sv(&[1, -1, -1, -1]), AuditMode::Strict).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: AuditReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["h"], "1");
        assert_eq!(value["steps"][0]["step_id"], "acheS");
        assert_eq!(value["steps"][8]["verdict"], "integrality-satisfied");
    }
}
