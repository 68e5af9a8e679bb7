//! The relaxation LP3, its dual LP4 and the explicit dual point for the
//! Z0/Z1 channel at `M = 2`, `n = 2`.
//!
//! LP4 variables are `lambda_{y1 y2 s1 s2}` and `mu_{s1 s2}` and
//! `xi_{x1 y1 y2 s1}` (all free) and `eta_{x1 x2 y1 y2 s1 s2} >= 0`, with the
//! subscripts written as digit strings.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::channel::builtin_z0z1;
use crate::rational::Rational;

use super::builders::{build_lp2, Q_CAUSAL_PREFIX};
use super::{LinearProgram, RowKind, Sense};

/// LP2 for Z0/Z1 at `M = 2`, `n = 2` without the q-causality rows.
pub fn build_lp3_z0z1() -> LinearProgram {
    let (mut lp, _) = build_lp2(&builtin_z0z1(), 2, 2, true).expect("fixed small instance");
    let dropped = lp.remove_rows(|label| label.starts_with(Q_CAUSAL_PREFIX));
    debug_assert_eq!(dropped, 4);
    lp
}

fn bits(v: &[usize]) -> String {
    v.iter().map(|b| char::from(b'0' + *b as u8)).collect()
}

pub fn lambda_name(y1: usize, y2: usize, s1: usize, s2: usize) -> String {
    format!("lambda_{}", bits(&[y1, y2, s1, s2]))
}

pub fn mu_name(s1: usize, s2: usize) -> String {
    format!("mu_{}", bits(&[s1, s2]))
}

pub fn xi_name(x1: usize, y1: usize, y2: usize, s1: usize) -> String {
    format!("xi_{}", bits(&[x1, y1, y2, s1]))
}

pub fn eta_name(x1: usize, x2: usize, y1: usize, y2: usize, s1: usize, s2: usize) -> String {
    format!("eta_{}", bits(&[x1, x2, y1, y2, s1, s2]))
}

/// The dual of LP3, transcribed for this instance.
pub fn build_lp4_z0z1() -> LinearProgram {
    let ch = builtin_z0z1();
    let b = [0usize, 1];
    let mut lp = LinearProgram::new(Sense::Minimize);
    let mut objective = Vec::new();
    for y1 in b {
        for y2 in b {
            for s1 in b {
                for s2 in b {
                    let j = lp.add_var(lambda_name(y1, y2, s1, s2), false);
                    objective.push((j, Rational::new(1, 2)));
                }
            }
        }
    }
    for s1 in b {
        for s2 in b {
            let j = lp.add_var(mu_name(s1, s2), false);
            objective.push((j, Rational::one()));
        }
    }
    for x1 in b {
        for y1 in b {
            for y2 in b {
                for s1 in b {
                    lp.add_var(xi_name(x1, y1, y2, s1), false);
                }
            }
        }
    }
    for x1 in b {
        for x2 in b {
            for y1 in b {
                for y2 in b {
                    for s1 in b {
                        for s2 in b {
                            lp.add_var(eta_name(x1, x2, y1, y2, s1, s2), true);
                        }
                    }
                }
            }
        }
    }
    lp.set_objective(objective);
    let var = |lp: &LinearProgram, name: String| lp.var(&name).expect("declared above");
    let quarter = Rational::new(1, 4);
    for x1 in b {
        for x2 in b {
            for y1 in b {
                for y2 in b {
                    for s1 in b {
                        for s2 in b {
                            let sign = if s2 == 0 { 1 } else { -1 };
                            let coeffs = vec![
                                (var(&lp, lambda_name(y1, y2, s1, s2)), Rational::one()),
                                (var(&lp, xi_name(x1, y1, y2, s1)), Rational::from_integer(sign)),
                                (var(&lp, eta_name(x1, x2, y1, y2, s1, s2)), Rational::one()),
                            ];
                            let rhs = &quarter * ch.prob(y1, x1, s1) * ch.prob(y2, x2, s2);
                            lp.add_row(
                                format!("dual_r[{}]", bits(&[x1, x2, y1, y2, s1, s2])),
                                coeffs,
                                RowKind::Ge,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
    }
    for x1 in b {
        for x2 in b {
            for s1 in b {
                for s2 in b {
                    let mut coeffs = vec![(var(&lp, mu_name(s1, s2)), Rational::one())];
                    for y1 in b {
                        for y2 in b {
                            coeffs.push((var(&lp, eta_name(x1, x2, y1, y2, s1, s2)), Rational::from_integer(-1)));
                        }
                    }
                    lp.add_row(
                        format!("dual_q[{}]", bits(&[x1, x2, s1, s2])),
                        coeffs,
                        RowKind::Ge,
                        Rational::zero(),
                    );
                }
            }
        }
    }
    lp
}

/// The explicit dual point; every variable not listed is zero.
///
/// Lambda entries carry six-digit indices such as `000100`; the first four
/// digits are `(y1, y2, s1, s2)` and the trailing pair is always `00`.
pub fn paper_certificate_z0z1() -> BTreeMap<String, Rational> {
    let f = |s: &str| crate::rational::parse_rational(s).expect("literal");
    let mut out = BTreeMap::new();
    let lambda = [
        ("000100", "3/16"),
        ("001000", "1/16"),
        ("010100", "3/16"),
        ("100100", "1/16"),
        ("101000", "3/16"),
        ("111000", "3/16"),
    ];
    for (idx, v) in lambda {
        out.insert(format!("lambda_{}", &idx[..4]), f(v));
    }
    for (idx, v) in [("00", "1/8"), ("01", "1/16"), ("10", "1/8"), ("11", "1/16")] {
        out.insert(format!("mu_{idx}"), f(v));
    }
    let xi = [
        ("0000", "1/8"),
        ("0011", "-1/16"),
        ("0100", "1/16"),
        ("0101", "-1/16"),
        ("0111", "-1/8"),
        ("1000", "1/8"),
        ("1001", "-1/16"),
        ("1010", "1/16"),
        ("1100", "1/16"),
        ("1101", "-1/16"),
        ("1110", "-1/16"),
        ("1111", "-3/16"),
    ];
    for (idx, v) in xi {
        out.insert(format!("xi_{idx}"), f(v));
    }
    let eta = [
        ("000000", "1/8"),
        ("000001", "1/16"),
        ("000010", "1/16"),
        ("000011", "1/16"),
        ("000110", "1/16"),
        ("010100", "1/8"),
        ("010101", "1/16"),
        ("010110", "1/8"),
        ("010111", "1/16"),
        ("101000", "1/16"),
        ("101001", "1/16"),
        ("101010", "1/8"),
        ("101011", "1/16"),
        ("101100", "1/16"),
        ("111100", "1/8"),
        ("111101", "1/16"),
        ("111110", "1/8"),
        ("111111", "1/16"),
    ];
    for (idx, v) in eta {
        out.insert(format!("eta_{idx}"), f(v));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateCheck {
    pub feasible: bool,
    pub objective: Rational,
    pub violations: Vec<String>,
}

/// Exact feasibility and objective of a named point; unnamed variables are zero.
pub fn verify_certificate(lp4: &LinearProgram, point: &BTreeMap<String, Rational>) -> crate::Result<CertificateCheck> {
    let assignment = lp4.assignment_from_map(point)?;
    let violations = lp4.violations(&assignment);
    Ok(CertificateCheck {
        feasible: violations.is_empty(),
        objective: lp4.objective_value(&assignment),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp4_shape() {
        let lp = build_lp4_z0z1();
        let count = |p: &str| lp.names().iter().filter(|n| n.starts_with(p)).count();
        assert_eq!((count("lambda_"), count("mu_"), count("xi_"), count("eta_")), (16, 4, 16, 64));
        assert_eq!(lp.rows().len(), 64 + 16);
        let row = lp.rows().iter().find(|r| r.label == "dual_r[110000]").unwrap();
        // N(0|1,0) N(0|1,0) / 4
        assert_eq!(row.rhs, Rational::new(1, 16));
        let xi = lp.var("xi_1000").unwrap();
        let row = lp.rows().iter().find(|r| r.label == "dual_r[110001]").unwrap();
        assert!(row.coeffs.contains(&(xi, Rational::from_integer(-1))));
    }

    #[test]
    fn certificate_entries() {
        let c = paper_certificate_z0z1();
        assert_eq!(c.len(), 6 + 4 + 12 + 18);
        assert_eq!(c["xi_1111"], Rational::new(-3, 16));
        assert_eq!(c["eta_000000"], Rational::new(1, 8));
        assert!(!c.contains_key("lambda_1111"));
        let lp = build_lp4_z0z1();
        let a = lp.assignment_from_map(&c).unwrap();
        assert_eq!(a[lp.var("lambda_1111").unwrap()], Rational::zero());
    }

    #[test]
    fn certificate_is_feasible_with_value_13_16() {
        let lp = build_lp4_z0z1();
        let check = verify_certificate(&lp, &paper_certificate_z0z1()).unwrap();
        assert!(check.feasible, "{:?}", check.violations);
        assert_eq!(check.objective, Rational::new(13, 16));
    }

    #[test]
    fn perturbed_points_fail() {
        let lp = build_lp4_z0z1();
        let zero = verify_certificate(&lp, &BTreeMap::new()).unwrap();
        assert!(!zero.feasible);
        let mut c = paper_certificate_z0z1();
        c.insert("mu_00".into(), Rational::new(1, 16));
        let check = verify_certificate(&lp, &c).unwrap();
        assert!(!check.feasible);
        // eta_000000 alone is 1/8 > 1/16
        assert!(check.violations.iter().any(|v| v.starts_with("dual_q[0000]")));
        assert!(check.violations.iter().all(|v| v.starts_with("dual_q")));
    }

    #[test]
    fn lp3_drops_only_q_causality() {
        let lp3 = build_lp3_z0z1();
        let (lp2, _) = build_lp2(&builtin_z0z1(), 2, 2, true).unwrap();
        assert_eq!(lp2.rows().len() - lp3.rows().len(), 4);
        assert!(lp3.rows().iter().all(|r| !r.label.starts_with(Q_CAUSAL_PREFIX)));
    }
}
