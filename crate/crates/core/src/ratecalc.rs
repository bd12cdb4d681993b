//! EPR generation rate of a node that decodes a fixed qubit budget of code
//! blocks every EC cycle. All quantities are exact; floats appear only in
//! [`RateReport::rate_f64`] and [`RateComparison::decimal`].

use alloc::format;

pub use num_rational::Ratio;

use crate::error::{param, Error, Result};
use crate::ftec::{CYCLE_T_UNITS, QUBITS_PER_BLOCK};
use crate::noise::effective_error_rate;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateConfig {
    pub qubit_budget: u64,
    pub code_n: u64,
    pub code_k: u64,
    /// Duration of one EC round in units of `T`.
    pub cycle_t_units: u64,
    pub p_c: f64,
    pub p_g: f64,
}

impl RateConfig {
    pub fn new(qubit_budget: u64, code_n: u64, code_k: u64) -> Self {
        RateConfig {
            qubit_budget,
            code_n,
            code_k,
            cycle_t_units: CYCLE_T_UNITS as u64,
            p_c: 0.0,
            p_g: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.code_n == 0 {
            return Err(param("code length must be positive"));
        }
        if self.code_k > self.code_n {
            return Err(param(format!("k = {} exceeds n = {}", self.code_k, self.code_n)));
        }
        if self.cycle_t_units == 0 {
            return Err(param("cycle length must be positive"));
        }
        effective_error_rate(self.p_c, self.p_g)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateReport {
    pub blocks: u64,
    /// Logical EPR pairs per `T`.
    pub epr_units_per_t: Ratio<u64>,
    pub p_eff: f64,
}

impl RateReport {
    pub fn rate_f64(&self) -> f64 {
        ratio_f64(self.epr_units_per_t)
    }
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Code blocks that fit in `q` qubits: a data block plus `2n` ancillas each.
pub fn blocks(q: u64, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    q / (QUBITS_PER_BLOCK as u64 * n)
}

pub fn epr_rate(config: &RateConfig) -> Result<RateReport> {
    config.validate()?;
    let b = blocks(config.qubit_budget, config.code_n);
    Ok(RateReport {
        blocks: b,
        epr_units_per_t: Ratio::new(config.code_k * b, config.cycle_t_units),
        p_eff: effective_error_rate(config.p_c, config.p_g)?,
    })
}

/// Rate of `b` relative to `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateComparison {
    pub ratio: Ratio<u64>,
    /// Whole-number folds, rounded down.
    pub folds: u64,
}

impl RateComparison {
    pub fn decimal(&self) -> f64 {
        ratio_f64(self.ratio)
    }
}

pub fn compare(a: &RateConfig, b: &RateConfig) -> Result<RateComparison> {
    let ra = epr_rate(a)?.epr_units_per_t;
    let rb = epr_rate(b)?.epr_units_per_t;
    if *ra.numer() == 0 {
        return Err(Error::DivisionByZero(format!("baseline rate is zero ({} blocks of k = {})", blocks(a.qubit_budget, a.code_n), a.code_k)));
    }
    let ratio = rb / ra;
    Ok(RateComparison {
        ratio,
        folds: ratio.to_integer(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn block_counts() {
        assert_eq!(blocks(68200, 289), 78);
        assert_eq!(blocks(68200, 3786), 6);
        assert_eq!(blocks(867, 289), 1);
        assert_eq!(blocks(866, 289), 0);
    }

    #[test]
    fn rates() {
        let surface = epr_rate(&RateConfig::new(68200, 289, 1)).unwrap();
        assert_eq!(surface.blocks, 78);
        assert_eq!(surface.epr_units_per_t, Ratio::new(39, 2));
        assert_eq!(surface.rate_f64(), 19.5);
        let sparse = epr_rate(&RateConfig::new(68200, 3786, 946)).unwrap();
        assert_eq!(sparse.epr_units_per_t, Ratio::from_integer(1419));
        let empty = epr_rate(&RateConfig::new(68200, 10, 0)).unwrap();
        assert_eq!(empty.epr_units_per_t, Ratio::from_integer(0));
    }

    #[test]
    fn p_eff_is_reported() {
        let mut c = RateConfig::new(1000, 9, 1);
        c.p_c = 0.01;
        c.p_g = 0.001;
        assert!((epr_rate(&c).unwrap().p_eff - 0.015).abs() < 1e-15);
    }

    #[test]
    fn comparison() {
        let a = RateConfig::new(68200, 289, 1);
        let b = RateConfig::new(68200, 3786, 946);
        let c = compare(&a, &b).unwrap();
        assert_eq!(c.ratio, Ratio::new(946, 13));
        assert_eq!(c.folds, 72);
        assert!((72.0..73.0).contains(&c.decimal()));
        assert_eq!(compare(&a, &a).unwrap().ratio, Ratio::from_integer(1));
        let zero = RateConfig::new(100, 289, 1);
        assert!(matches!(compare(&zero, &b), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn invalid_configs() {
        assert!(epr_rate(&RateConfig::new(100, 0, 0)).is_err());
        assert!(epr_rate(&RateConfig::new(100, 3, 4)).is_err());
        let mut c = RateConfig::new(100, 3, 1);
        c.cycle_t_units = 0;
        assert!(epr_rate(&c).is_err());
    }

    proptest! {
        #[test]
        fn blocks_monotone(q in 0u64..1_000_000, n in 1u64..5000, dq in 0u64..10_000, dn in 0u64..100) {
            prop_assert!(blocks(q + dq, n) >= blocks(q, n));
            prop_assert!(blocks(q, n + dn) <= blocks(q, n));
        }

        #[test]
        fn doubling_budget(q in 1u64..200_000, na in 1u64..2000, nb in 1u64..2000, ka in 1u64..50, kb in 0u64..50) {
            let a = RateConfig::new(q, na, ka.min(na));
            let b = RateConfig::new(q, nb, kb.min(nb));
            let a2 = RateConfig { qubit_budget: 2 * q, ..a };
            let b2 = RateConfig { qubit_budget: 2 * q, ..b };
            if blocks(q, na) > 0 {
                let r1 = compare(&a, &b).unwrap().ratio;
                let r2 = compare(&a2, &b2).unwrap().ratio;
                let scales = blocks(2 * q, na) == 2 * blocks(q, na) && blocks(2 * q, nb) == 2 * blocks(q, nb);
                if scales {
                    prop_assert_eq!(r1, r2);
                } else {
                    // recompute directly from the block counts
                    let direct = Ratio::new(b2.code_k * blocks(2 * q, nb), a2.code_k * blocks(2 * q, na));
                    prop_assert_eq!(r2, direct);
                }
            }
        }
    }
}
