//! Chain scenario files.
//!
//! ```json
//! {
//!   "links": 4,
//!   "fidelities": 0.95,
//!   "rounds": 2,
//!   "schedule": "nested",
//!   "delays": 10,
//!   "mode": "physical"
//! }
//! ```
//!
//! `fidelities` is one Werner fidelity for every link or a list with one per
//! link. `delays` is the one-hop delay in `T`; a list must repeat a single
//! value. `purify` overrides the alternating bit/phase schedule implied by
//! `rounds`. Encoded modes also read `code_id`, `decoder`, `p_g`, `trials`
//! and `seed`.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use qnet_core::decoders::DecoderKind;
use qnet_core::netchain::{ChainConfig, ChainMode, EncodedLink, SwapSchedule};
use qnet_core::noise::werner;
use qnet_core::protocols::{alternating_schedule, PurifyBasis};

use crate::codespec::parse_code;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainScenario {
    pub links: usize,
    pub fidelities: OneOrMany,
    #[serde(default)]
    pub rounds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purify: Option<Vec<String>>,
    #[serde(default = "default_schedule")]
    pub schedule: String,
    pub delays: OneOrMany,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoder: Option<String>,
    #[serde(default)]
    pub p_g: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_schedule() -> String {
    "nested".into()
}

fn default_mode() -> String {
    "physical".into()
}

pub fn parse_schedule(s: &str) -> Result<SwapSchedule, CliError> {
    match s {
        "sequential" => Ok(SwapSchedule::Sequential),
        "nested" => Ok(SwapSchedule::Nested),
        other => Err(CliError::Usage(format!("unknown swap schedule {other:?} (sequential, nested)"))),
    }
}

pub fn parse_mode(s: &str) -> Result<ChainMode, CliError> {
    match s {
        "physical" => Ok(ChainMode::Physical),
        "encoded_teleport" => Ok(ChainMode::EncodedTeleport),
        "encoded_direct" => Ok(ChainMode::EncodedDirect),
        other => Err(CliError::Usage(format!("unknown chain mode {other:?} (physical, encoded_teleport, encoded_direct)"))),
    }
}

pub fn parse_basis(s: &str) -> Result<PurifyBasis, CliError> {
    match s {
        "bit_flip" => Ok(PurifyBasis::BitFlip),
        "phase_flip" => Ok(PurifyBasis::PhaseFlip),
        other => Err(CliError::Usage(format!("unknown purification basis {other:?} (bit_flip, phase_flip)"))),
    }
}

impl ChainScenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Resolves the scenario into a chain. `trials` and `seed` fill in
    /// values the file leaves out.
    pub fn to_config(&self, trials: u64, seed: u64) -> Result<ChainConfig, CliError> {
        let fids = match &self.fidelities {
            OneOrMany::One(f) => vec![*f; self.links],
            OneOrMany::Many(v) => v.clone(),
        };
        if fids.len() != self.links {
            return Err(CliError::Usage(format!("{} fidelities for {} links", fids.len(), self.links)));
        }
        let delay = match &self.delays {
            OneOrMany::One(d) => *d,
            OneOrMany::Many(v) => {
                let first = *v.first().ok_or_else(|| CliError::Usage("empty delay list".into()))?;
                if v.iter().any(|&d| d != first) {
                    return Err(CliError::Usage("per-hop delays must all be equal".into()));
                }
                first
            }
        };
        let link_states = fids.iter().map(|&f| werner(f)).collect::<Result<Vec<_>, _>>().map_err(CliError::usage)?;
        let purify_schedule = match &self.purify {
            Some(list) => list.iter().map(|s| parse_basis(s)).collect::<Result<Vec<_>, _>>()?,
            None => alternating_schedule(self.rounds),
        };
        let mode = parse_mode(&self.mode)?;
        let encoded = match (&self.code_id, mode) {
            (Some(id), _) => {
                let code = parse_code(id)?;
                let decoder = match &self.decoder {
                    Some(d) => DecoderKind::from_str(d).map_err(CliError::usage)?,
                    None => DecoderKind::default_for(&code),
                };
                Some(EncodedLink {
                    code,
                    decoder,
                    trials: self.trials.unwrap_or(trials),
                    seed: self.seed.unwrap_or(seed),
                })
            }
            (None, ChainMode::Physical) => None,
            (None, _) => return Err(CliError::Usage(format!("mode {} needs a code_id", self.mode))),
        };
        let config = ChainConfig {
            link_states,
            purify_schedule,
            swap_schedule: parse_schedule(&self.schedule)?,
            hop_delay: delay,
            mode,
            p_g: self.p_g,
            encoded,
        };
        config.validate().map_err(CliError::usage)?;
        Ok(config)
    }
}

impl FromStr for ChainScenario {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qnet_core::netchain::run_chain;

    #[test]
    fn default_scenario_file() {
        let s: ChainScenario = r#"{"links": 4, "fidelities": 0.95, "rounds": 2, "schedule": "nested", "delays": 10, "mode": "physical"}"#
            .parse()
            .unwrap();
        let cfg = s.to_config(100, 1).unwrap();
        let expect = ChainConfig::default_scenario();
        assert_eq!(cfg.link_states, expect.link_states);
        assert_eq!(cfg.purify_schedule, expect.purify_schedule);
        assert_eq!(cfg.swap_schedule, expect.swap_schedule);
        assert_eq!(cfg.hop_delay, expect.hop_delay);
        assert_eq!(run_chain(&cfg).unwrap(), run_chain(&expect).unwrap());
    }

    #[test]
    fn lists_and_encoded_fields() {
        let s: ChainScenario = r#"{"links": 2, "fidelities": [0.9, 0.95], "purify": ["phase_flip"], "delays": [5, 5],
            "mode": "encoded_direct", "code_id": "shor9", "p_g": 0.001, "trials": 50}"#
            .parse()
            .unwrap();
        let cfg = s.to_config(1000, 7).unwrap();
        assert_eq!(cfg.purify_schedule, vec![PurifyBasis::PhaseFlip]);
        let enc = cfg.encoded.unwrap();
        assert_eq!(enc.trials, 50);
        assert_eq!(enc.seed, 7);
        assert_eq!(enc.decoder, DecoderKind::Lookup);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            r#"{"links": 2, "fidelities": [0.9], "delays": 1}"#,
            r#"{"links": 2, "fidelities": 0.9, "delays": [1, 2]}"#,
            r#"{"links": 2, "fidelities": 0.9, "delays": 1, "mode": "warp"}"#,
            r#"{"links": 2, "fidelities": 0.9, "delays": 1, "mode": "encoded_direct"}"#,
            r#"{"links": 2, "fidelities": 1.5, "delays": 1}"#,
            r#"{"links": 0, "fidelities": 0.9, "delays": 1}"#,
            r#"{"links": 2, "fidelities": 0.9, "delays": 1, "schedule": "random"}"#,
        ] {
            let s: ChainScenario = bad.parse().unwrap();
            assert!(matches!(s.to_config(10, 0), Err(CliError::Usage(_))), "{bad}");
        }
        assert!(r#"{"links": 2, "fidelities": 0.9, "delays": 1, "colour": 3}"#.parse::<ChainScenario>().is_err());
    }
}
