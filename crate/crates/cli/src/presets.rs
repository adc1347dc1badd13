//! Built-in config presets, embedded at compile time. `full` presets carry
//! the full-scale reference parameters; `smoke` presets finish in seconds.

const PRESETS: &[(&str, &str)] = &[
    ("exp1-full", include_str!("../presets/exp1-full.cfg")),
    ("exp1-smoke", include_str!("../presets/exp1-smoke.cfg")),
    ("exp2-full", include_str!("../presets/exp2-full.cfg")),
    ("exp2-smoke", include_str!("../presets/exp2-smoke.cfg")),
    ("exp3-full", include_str!("../presets/exp3-full.cfg")),
    ("exp3-smoke", include_str!("../presets/exp3-smoke.cfg")),
    ("exp4-full", include_str!("../presets/exp4-full.cfg")),
    ("exp4-smoke", include_str!("../presets/exp4-smoke.cfg")),
    ("multi-full", include_str!("../presets/multi-full.cfg")),
    ("multi-smoke", include_str!("../presets/multi-smoke.cfg")),
    ("samediff-full", include_str!("../presets/samediff-full.cfg")),
    ("samediff-smoke", include_str!("../presets/samediff-smoke.cfg")),
    ("theorem1-full", include_str!("../presets/theorem1-full.cfg")),
    ("theorem1-smoke", include_str!("../presets/theorem1-smoke.cfg")),
    ("lemma1-full", include_str!("../presets/lemma1-full.cfg")),
    ("lemma1-smoke", include_str!("../presets/lemma1-smoke.cfg")),
];

/// Resolves a preset name. Bare names like `full` are prefixed with the
/// subcommand, so `exp2 --preset full` means `exp2-full`.
pub fn lookup(subcommand: &str, name: &str) -> Option<&'static str> {
    let full = if name.contains('-') {
        name.to_string()
    } else {
        format!("{subcommand}-{name}")
    };
    PRESETS
        .iter()
        .find(|(key, _)| *key == full)
        .map(|(_, text)| *text)
}

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|(key, _)| *key).collect()
}
