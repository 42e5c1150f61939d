//! Turning a config into a concrete parameter instance.

use r2pencil_core::algebra::{gauss_int, Exact};
use r2pencil_core::fixtures;
use r2pencil_core::recurrence::ParamSeq;
use r2pencil_core::sampling::{random_params, RandomSpec};

use crate::config::{explicit_params, ConfigError, Mode, Preset, RunConfig, DEFAULT_N};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    /// Stable identifier used in reports.
    pub id: String,
    pub params: ParamSeq<Exact>,
    /// Working depth before backend caps.
    pub n: usize,
    /// Seed for every sampled quantity downstream (evaluation points, free
    /// pencil values, shift points).
    pub seed: u64,
    pub z_hat: Option<Exact>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("instance generation: {0}")]
    Core(#[from] r2pencil_core::Error),
}

/// The parameters described by `cfg`.
pub fn gen_instance(cfg: &RunConfig) -> Result<Instance, InstanceError> {
    match cfg.mode {
        Mode::Random => {
            let n = cfg.n.unwrap_or(DEFAULT_N);
            let spec = RandomSpec {
                depth: n,
                min_abs: cfg.min_abs,
                max_abs: cfg.max_abs,
                unimodular: cfg.unimodular,
            };
            let params = random_params(cfg.seed, spec)?;
            let kind = if cfg.unimodular { "unimodular" } else { "random" };
            Ok(Instance {
                id: format!("{kind}-seed{}-n{n}", cfg.seed),
                params,
                n,
                seed: cfg.seed,
                z_hat: cfg.z_hat.clone(),
            })
        }
        Mode::Explicit => {
            let raw = cfg
                .explicit
                .as_ref()
                .ok_or_else(|| ConfigError::new("params", "required when mode is \"explicit\""))?;
            let params = explicit_params(raw)?;
            let n = depth_for(&params, cfg.n)?;
            Ok(Instance {
                id: "explicit".to_string(),
                params,
                n,
                seed: cfg.seed,
                z_hat: cfg.z_hat.clone(),
            })
        }
        Mode::Preset => {
            let preset = cfg
                .preset
                .ok_or_else(|| ConfigError::new("preset", "required when mode is \"preset\""))?;
            let params = preset_params(preset);
            let n = depth_for(&params, cfg.n)?;
            // the reference shift point of the second fixture
            let z_hat = cfg
                .z_hat
                .clone()
                .or_else(|| (preset == Preset::S2).then(|| gauss_int(1, 0)));
            Ok(Instance {
                id: preset.name().to_string(),
                params,
                n,
                seed: cfg.seed,
                z_hat,
            })
        }
    }
}

pub fn preset_params(preset: Preset) -> ParamSeq<Exact> {
    match preset {
        Preset::S1 => fixtures::s1(),
        Preset::S2 => fixtures::s2(),
    }
}

fn depth_for(params: &ParamSeq<Exact>, requested: Option<usize>) -> Result<usize, ConfigError> {
    let available = params.depth();
    match requested {
        None => Ok(available),
        Some(n) if n <= available => Ok(n),
        Some(n) => Err(ConfigError::new(
            "N",
            format!("{n} exceeds the depth {available} the parameters support"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use r2pencil_core::algebra::scalar::is_unimodular_exact;
    use r2pencil_core::algebra::Scalar;

    #[test]
    fn same_seed_same_instance() {
        let cfg = RunConfig::random(5, 6);
        assert_eq!(gen_instance(&cfg).unwrap(), gen_instance(&cfg).unwrap());
        assert_ne!(
            gen_instance(&cfg).unwrap().params,
            gen_instance(&RunConfig::random(6, 6)).unwrap().params
        );
    }

    #[test]
    fn unimodular_flag_is_honored() {
        let cfg = RunConfig {
            unimodular: true,
            ..RunConfig::random(3, 6)
        };
        let inst = gen_instance(&cfg).unwrap();
        assert!(inst.params.betas()[1..].iter().all(is_unimodular_exact));
        assert!(inst.params.is_special_case());
    }

    #[test]
    fn presets_resolve() {
        let s1 = gen_instance(&RunConfig::preset(Preset::S1)).unwrap();
        assert_eq!(s1.id, "s1");
        assert_eq!(s1.params.alpha(1), &gauss_int(2, 0));
        let s2 = gen_instance(&RunConfig::preset(Preset::S2)).unwrap();
        assert_eq!(s2.z_hat, Some(gauss_int(1, 0)));
        assert!(s2.params.beta(1).magnitude() == 1.0);
    }

    #[test]
    fn too_deep_explicit_request_is_rejected() {
        let cfg = RunConfig {
            n: Some(40),
            ..RunConfig::preset(Preset::S1)
        };
        assert!(matches!(gen_instance(&cfg), Err(InstanceError::Config(_))));
    }
}
