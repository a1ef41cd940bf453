//! Rational lower-bound machinery for sorting well-stirred configurations.
//!
//! The certified chain: for a configuration that is well stirred at
//! `(kappa, eps)`, the minimum cost `V(s)` of creating a monochromatic run
//! of length `s` obeys `V(s) >= s - eps` and the split recursion
//! `V(s) >= min_sigma V(s-sigma) + V(sigma) + kappa^2*s + (1-kappa^2)*sigma`.
//! Iterating the recursion gives `V(s) >= (1 + n*kappa^2)*s - 2^n*eps`, and
//! `n_of_eps` is the largest depth at which the linear growth still
//! dominates the doubled window term at `s = kappa/2`. The final certified
//! bound on any complete sorting cost is `(kappa^3/4) * n_of_eps`.
//!
//! All arithmetic here is exact; no tolerance appears anywhere.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("kappa must lie strictly between 0 and 1, got {0}")]
    KappaOutOfRange(Rational),
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    EpsOutOfRange(Rational),
    #[error("s must lie in (0, kappa], got s={s} with kappa={kappa}")]
    SOutOfRange { s: Box<Rational>, kappa: Box<Rational> },
    #[error("empty cost table")]
    EmptyTable,
    #[error("cost table needs a positive cell count")]
    ZeroCells,
}

fn validate_kappa(kappa: &Rational) -> Result<(), BoundsError> {
    if *kappa <= Rational::zero() || *kappa >= Rational::one() {
        return Err(BoundsError::KappaOutOfRange(kappa.clone()));
    }
    Ok(())
}

fn validate_eps(eps: &Rational) -> Result<(), BoundsError> {
    if *eps <= Rational::zero() || *eps >= Rational::one() {
        return Err(BoundsError::EpsOutOfRange(eps.clone()));
    }
    Ok(())
}

/// Chain value at depth `n`: `(1 + n*kappa^2)*s - 2^n*eps`.
fn chain_value(kappa: &Rational, eps: &Rational, s: &Rational, n: u32) -> Rational {
    let growth = Rational::one() + Rational::from_integer(n.into()) * kappa * kappa;
    let doubled = Rational::from_integer(BigInt::one() << n) * eps;
    growth * s - doubled
}

/// Does the linear growth still dominate the doubled window at depth `n`?
/// Exactly: `(1 + n*kappa^2) * kappa/2 >= 2^(n+1) * eps`.
fn depth_holds(kappa: &Rational, eps: &Rational, n: u32) -> bool {
    let lhs = (Rational::one() + Rational::from_integer(n.into()) * kappa * kappa) * kappa
        / Rational::from_integer(2.into());
    let rhs = Rational::from_integer(BigInt::one() << (n + 1)) * eps;
    lhs >= rhs
}

/// The largest depth `n >= 0` with `(1 + n*kappa^2)*kappa/2 >= 2^(n+1)*eps`,
/// or 0 when even depth 0 fails (the bound is then vacuous). The left side
/// grows linearly and the right side doubles, so the scan terminates.
pub fn n_of_eps(kappa: &Rational, eps: &Rational) -> Result<u32, BoundsError> {
    validate_kappa(kappa)?;
    validate_eps(eps)?;
    if !depth_holds(kappa, eps, 0) {
        return Ok(0);
    }
    let mut n = 0;
    while depth_holds(kappa, eps, n + 1) {
        n += 1;
    }
    Ok(n)
}

/// Certified lower bound `(kappa^3/4) * n_of_eps(kappa, eps)` on the
/// normalized cost of completely sorting any configuration well stirred at
/// `(kappa, eps)`. Vacuously 0 when the depth degenerates.
pub fn cost_lower_bound(kappa: &Rational, eps: &Rational) -> Result<Rational, BoundsError> {
    let n = n_of_eps(kappa, eps)?;
    Ok(kappa * kappa * kappa / Rational::from_integer(4.into())
        * Rational::from_integer(n.into()))
}

/// Chain values `(n, (1 + n*kappa^2)*s - 2^n*eps)` for `n = 0..=n_max`.
/// Values may be negative; callers take the running maximum.
pub fn induction_chain(
    kappa: &Rational,
    eps: &Rational,
    s: &Rational,
    n_max: u32,
) -> Result<Vec<(u32, Rational)>, BoundsError> {
    validate_kappa(kappa)?;
    validate_eps(eps)?;
    if *s <= Rational::zero() || s > kappa {
        return Err(BoundsError::SOutOfRange {
            s: Box::new(s.clone()),
            kappa: Box::new(kappa.clone()),
        });
    }
    Ok((0..=n_max).map(|n| (n, chain_value(kappa, eps, s, n))).collect())
}

/// Full certificate: the depth, the final bound, and the chain evaluated at
/// `s = kappa/2`. `degenerate` marks a vacuous bound (depth 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kappa: Rational,
    pub eps: Rational,
    pub n_eps: u32,
    pub bound: Rational,
    pub degenerate: bool,
    /// Chain values at `s = kappa/2` for depths `0..=n_eps` (diagnostics;
    /// not part of the serialized record).
    pub chain: Vec<(u32, Rational)>,
}

pub fn certificate(kappa: &Rational, eps: &Rational) -> Result<BoundCertificate, BoundsError> {
    let n_eps = n_of_eps(kappa, eps)?;
    let bound = cost_lower_bound(kappa, eps)?;
    let half_kappa = kappa / Rational::from_integer(2.into());
    let chain = induction_chain(kappa, eps, &half_kappa, n_eps)?;
    Ok(BoundCertificate {
        kappa: kappa.clone(),
        eps: eps.clone(),
        n_eps,
        bound,
        degenerate: n_eps == 0,
        chain,
    })
}

impl Serialize for BoundCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut record = serializer.serialize_struct("BoundCertificate", 5)?;
        record.serialize_field("kappa", &format_rational(&self.kappa))?;
        record.serialize_field("eps", &format_rational(&self.eps))?;
        record.serialize_field("n_eps", &self.n_eps)?;
        record.serialize_field("bound", &format_rational(&self.bound))?;
        record.serialize_field("degenerate", &self.degenerate)?;
        record.end()
    }
}

/// Minimal run-creation costs tabulated on the cell grid: `value(s)` is the
/// normalized cost of forcing a monochromatic run of `s` cells, for
/// `s = 1..=max_run`. `V(0)` is 0 by convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VTable {
    cells: usize,
    values: Vec<Rational>,
}

impl VTable {
    /// `values[s-1]` is the normalized cost for run length `s`.
    pub fn new(cells: usize, values: Vec<Rational>) -> Result<VTable, BoundsError> {
        if cells == 0 {
            return Err(BoundsError::ZeroCells);
        }
        if values.is_empty() {
            return Err(BoundsError::EmptyTable);
        }
        Ok(VTable { cells, values })
    }

    /// Build from integer cell costs, normalizing by the cell count.
    pub fn from_cell_costs(cells: usize, costs: &[u64]) -> Result<VTable, BoundsError> {
        let values = costs
            .iter()
            .map(|&c| Rational::new(c.into(), BigInt::from(cells)))
            .collect();
        VTable::new(cells, values)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Largest tabulated run length.
    pub fn max_run(&self) -> usize {
        self.values.len()
    }

    /// Normalized cost for run length `s` (cells); `s = 0` gives 0.
    pub fn value(&self, s: usize) -> Rational {
        if s == 0 {
            Rational::zero()
        } else {
            self.values[s - 1].clone()
        }
    }

    fn length(&self, cells: usize) -> Rational {
        Rational::new(BigInt::from(cells), BigInt::from(self.cells))
    }
}

/// Which tabulated inequality a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VInequality {
    /// `V(s) >= s - eps`.
    Linear,
    /// `V(s) >= min_sigma V(s-sigma) + V(sigma) + kappa^2*s + (1-kappa^2)*sigma`.
    Split,
}

/// A concrete violation: the run length, the minimizing split (for the split
/// inequality), and both sides of the failed comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VWitness {
    pub inequality: VInequality,
    pub s: usize,
    pub sigma: Option<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VReport {
    pub linear_holds: bool,
    pub split_holds: bool,
    pub witnesses: Vec<VWitness>,
}

/// Check both tabulated inequalities in exact rationals.
///
/// The linear bound is tested at every tabulated `s`; the split recursion at
/// every tabulated `s` with `s > eps`, minimizing over the cell grid
/// `0 < sigma < s`. Every violation is recorded as a witness.
pub fn check_v_inequalities(
    table: &VTable,
    kappa: &Rational,
    eps: &Rational,
) -> Result<VReport, BoundsError> {
    validate_kappa(kappa)?;
    validate_eps(eps)?;
    let mut witnesses = Vec::new();
    let mut linear_holds = true;
    let mut split_holds = true;
    let kappa_sq = kappa * kappa;
    let one_minus = Rational::one() - &kappa_sq;

    for s in 1..=table.max_run() {
        let lhs = table.value(s);
        let rhs = table.length(s) - eps;
        if lhs < rhs {
            linear_holds = false;
            witnesses.push(VWitness {
                inequality: VInequality::Linear,
                s,
                sigma: None,
                lhs,
                rhs,
            });
        }
    }

    for s in 1..=table.max_run() {
        if table.length(s) <= *eps {
            continue;
        }
        let mut best: Option<(usize, Rational)> = None;
        for sigma in 1..s {
            let candidate = table.value(s - sigma)
                + table.value(sigma)
                + &kappa_sq * table.length(s)
                + &one_minus * table.length(sigma);
            if best.as_ref().is_none_or(|(_, b)| candidate < *b) {
                best = Some((sigma, candidate));
            }
        }
        if let Some((sigma, rhs)) = best {
            let lhs = table.value(s);
            if lhs < rhs {
                split_holds = false;
                witnesses.push(VWitness {
                    inequality: VInequality::Split,
                    s,
                    sigma: Some(sigma),
                    lhs,
                    rhs,
                });
            }
        }
    }

    Ok(VReport { linear_holds, split_holds, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::ToPrimitive;

    #[test]
    fn depth_examples() {
        assert_eq!(n_of_eps(&ratio(1, 2), &ratio(1, 1024)).unwrap(), 8);
        assert_eq!(n_of_eps(&ratio(1, 2), &ratio(1, 8)).unwrap(), 0);
        assert_eq!(n_of_eps(&ratio(1, 2), &ratio(1, 1 << 20)).unwrap(), 19);
    }

    #[test]
    fn depth_rejects_out_of_range_parameters() {
        assert!(matches!(
            n_of_eps(&ratio(3, 2), &ratio(1, 8)),
            Err(BoundsError::KappaOutOfRange(_))
        ));
        assert!(matches!(
            n_of_eps(&ratio(1, 2), &ratio(2, 1)),
            Err(BoundsError::EpsOutOfRange(_))
        ));
        assert!(matches!(
            n_of_eps(&ratio(1, 2), &ratio(0, 1)),
            Err(BoundsError::EpsOutOfRange(_))
        ));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(cost_lower_bound(&ratio(1, 2), &ratio(1, 1024)).unwrap(), ratio(1, 4));
        assert_eq!(cost_lower_bound(&ratio(1, 2), &ratio(1, 8)).unwrap(), ratio(0, 1));
        assert_eq!(
            cost_lower_bound(&ratio(1, 2), &ratio(1, 1 << 20)).unwrap(),
            ratio(19, 32)
        );
    }

    #[test]
    fn maximality_of_the_returned_depth() {
        // Independent recheck of the defining inequality at n and n + 1.
        let holds = |kappa: &Rational, eps: &Rational, n: u32| {
            let lhs = (Rational::one() + Rational::from_integer(n.into()) * kappa * kappa)
                * kappa
                / Rational::from_integer(2.into());
            let rhs = Rational::from_integer(BigInt::one() << (n + 1)) * eps;
            lhs >= rhs
        };
        for (p, q) in [(1i64, 2i64), (1, 3), (2, 5), (3, 4)] {
            let kappa = ratio(p, q);
            for m in 2..=24u32 {
                let eps = Rational::new(BigInt::one(), BigInt::one() << m);
                let n = n_of_eps(&kappa, &eps).unwrap();
                if n > 0 || holds(&kappa, &eps, 0) {
                    assert!(holds(&kappa, &eps, n), "kappa={kappa} eps=2^-{m}");
                }
                assert!(!holds(&kappa, &eps, n + 1), "kappa={kappa} eps=2^-{m}");
            }
        }
    }

    #[test]
    fn depth_is_monotone_under_halving_eps() {
        for (p, q) in [(1i64, 2i64), (1, 4), (2, 5)] {
            let kappa = ratio(p, q);
            for m in 1..=30u32 {
                let eps = Rational::new(BigInt::one(), BigInt::one() << m);
                let half = &eps / Rational::from_integer(2.into());
                assert!(n_of_eps(&kappa, &half).unwrap() >= n_of_eps(&kappa, &eps).unwrap());
            }
        }
    }

    #[test]
    fn depth_grows_logarithmically() {
        let kappa = ratio(1, 2);
        for m in 3..=40u32 {
            let eps = Rational::new(BigInt::one(), BigInt::one() << m);
            let n = n_of_eps(&kappa, &eps).unwrap();
            assert!(n >= m - 3, "m={m} gave n={n}");
        }
    }

    #[test]
    fn chain_examples() {
        let chain = induction_chain(&ratio(1, 2), &ratio(1, 16), &ratio(1, 4), 1).unwrap();
        assert_eq!(chain[1], (1, ratio(3, 16)));
        // Depth 0 collapses to s - eps.
        assert_eq!(chain[0], (0, ratio(1, 4) - ratio(1, 16)));
        let chain = induction_chain(&ratio(1, 2), &ratio(1, 4), &ratio(1, 4), 2).unwrap();
        assert_eq!(chain[2], (2, ratio(-5, 8)));
        // Depth 1 is (1 + kappa^2)s - 2*eps.
        let kappa = ratio(2, 5);
        let eps = ratio(1, 32);
        let s = ratio(1, 5);
        let chain = induction_chain(&kappa, &eps, &s, 1).unwrap();
        let expected = (Rational::one() + &kappa * &kappa) * &s - ratio(2, 1) * &eps;
        assert_eq!(chain[1].1, expected);
    }

    #[test]
    fn chain_rejects_s_outside_range() {
        assert!(matches!(
            induction_chain(&ratio(1, 2), &ratio(1, 16), &ratio(3, 4), 1),
            Err(BoundsError::SOutOfRange { .. })
        ));
        assert!(matches!(
            induction_chain(&ratio(1, 2), &ratio(1, 16), &ratio(0, 1), 1),
            Err(BoundsError::SOutOfRange { .. })
        ));
    }

    #[test]
    fn certificate_carries_the_chain_and_serializes_without_it() {
        let cert = certificate(&ratio(1, 2), &ratio(1, 1024)).unwrap();
        assert_eq!(cert.n_eps, 8);
        assert_eq!(cert.bound, ratio(1, 4));
        assert!(!cert.degenerate);
        assert_eq!(cert.chain.len(), 9);
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            r#"{"kappa":"1/2","eps":"1/1024","n_eps":8,"bound":"1/4","degenerate":false}"#
        );

        let vacuous = certificate(&ratio(1, 2), &ratio(1, 8)).unwrap();
        assert_eq!(vacuous.n_eps, 0);
        assert!(vacuous.degenerate);
        assert_eq!(
            serde_json::to_string(&vacuous).unwrap(),
            r#"{"kappa":"1/2","eps":"1/8","n_eps":0,"bound":"0","degenerate":true}"#
        );
    }

    #[test]
    fn fictitious_tables_drive_the_checker() {
        // V(s) = s: the linear bound holds with room to spare.
        let n = 8;
        let identity = VTable::new(
            n,
            (1..=n).map(|s| ratio(s as i64, n as i64)).collect(),
        )
        .unwrap();
        let report = check_v_inequalities(&identity, &ratio(1, 4), &ratio(1, 8)).unwrap();
        assert!(report.linear_holds);

        // V = 0 with a table covering s = 1/4 violates the linear bound there.
        let zero = VTable::new(n, vec![Rational::zero(); 2]).unwrap();
        let report = check_v_inequalities(&zero, &ratio(1, 4), &ratio(1, 8)).unwrap();
        assert!(!report.linear_holds);
        let witness = report
            .witnesses
            .iter()
            .find(|w| w.inequality == VInequality::Linear && w.s == 2)
            .expect("violation at s = 2 cells (length 1/4)");
        assert_eq!(witness.rhs, ratio(1, 8));
    }

    #[test]
    fn checker_rejects_degenerate_tables() {
        assert!(matches!(VTable::new(0, vec![Rational::zero()]), Err(BoundsError::ZeroCells)));
        assert!(matches!(VTable::new(4, vec![]), Err(BoundsError::EmptyTable)));
    }

    #[test]
    fn split_inequality_detects_a_planted_violation() {
        // Cheap large runs over expensive small ones break the recursion.
        let table = VTable::new(
            16,
            vec![ratio(1, 4), ratio(1, 2), ratio(0, 1), ratio(0, 1)],
        )
        .unwrap();
        let report = check_v_inequalities(&table, &ratio(1, 2), &ratio(1, 16)).unwrap();
        assert!(!report.split_holds);
        assert!(report
            .witnesses
            .iter()
            .any(|w| w.inequality == VInequality::Split && w.sigma.is_some()));
    }

    #[test]
    fn depth_scan_handles_wide_ranges() {
        // The scan is linear in the answer, which is near log2(1/eps).
        let eps = Rational::new(BigInt::one(), BigInt::one() << 200);
        let n = n_of_eps(&ratio(1, 2), &eps).unwrap();
        assert!(n.to_u64().unwrap() > 150);
    }
}
