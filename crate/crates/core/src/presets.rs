//! Bundled run configurations, compiled into the binary so every standard
//! sweep and map is reproducible from a bare checkout with one command.
//! The same files live under `presets/` for editing and committing.

use crate::config::RunConfig;
use crate::error::{Error, Result};

macro_rules! presets {
    ($($name:literal),+ $(,)?) => {
        /// Preset names accepted by `--preset`, in a fixed order.
        pub const PRESET_NAMES: &[&str] = &[$($name),+];

        /// Raw JSON of a bundled preset.
        pub fn preset_json(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../presets/", $name, ".json"))),)+
                _ => None,
            }
        }
    };
}

presets!(
    "fig1_map",
    "fig2_box_two_level",
    "fig2_box_n_level",
    "fig2_harmonic_two_level",
    "fig2_harmonic_n_level",
    "fig4_case1_two_level",
    "fig4_case1_n_level",
    "fig4_case2_two_level",
    "fig4_case2_n_level",
    "fig4_case3_two_level",
    "fig4_case3_n_level",
    "fig4_case4_two_level",
    "fig4_case4_n_level",
);

/// Parse and validate a bundled preset.
pub fn preset(name: &str) -> Result<RunConfig> {
    let text = preset_json(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset {name:?}; available: {}",
            PRESET_NAMES.join(", ")
        ))
    })?;
    RunConfig::from_json(text)
}
