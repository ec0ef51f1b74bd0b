//! Bundled text-model presets, one TOML file per language.

use stacksa_core::textproc::TextModelConfig;

use crate::error::{Error, Result};

pub const PRESETS: &[(&str, &str)] = &[
    ("default", include_str!("../presets/default.toml")),
    ("arabic", include_str!("../presets/arabic.toml")),
    ("english", include_str!("../presets/english.toml")),
    ("spanish", include_str!("../presets/spanish.toml")),
];

fn canonical(name: &str) -> &str {
    match name {
        "ar" => "arabic",
        "en" => "english",
        "es" => "spanish",
        other => other,
    }
}

pub fn load(name: &str) -> Result<TextModelConfig> {
    let name = canonical(name);
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Spec(format!("unknown language preset `{name}`")))?;
    toml::from_str(text).map_err(|e| Error::Spec(format!("preset {name}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn files_match_the_built_in_presets() {
        for (name, _) in PRESETS {
            assert_eq!(load(name).unwrap(), TextModelConfig::preset(name).unwrap(), "{name}");
        }
        assert_eq!(load("es").unwrap(), TextModelConfig::spanish());
    }
}
