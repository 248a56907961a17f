use std::sync::OnceLock;

use regex::Regex;

fn number_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"-?\d+(?:[.,]\d+)?").unwrap())
}

/// Numbers that are not glued to letters (`u5`, `2a` are skipped). A decimal
/// comma directly between digits is read as a decimal point.
pub fn standalone_numbers(text: &str) -> Vec<f64> {
    number_re()
        .find_iter(text)
        .filter(|m| {
            let before = text[..m.start()].chars().next_back();
            let after = text[m.end()..].chars().next();
            !before.is_some_and(|c| c.is_alphanumeric() || c == '_') && !after.is_some_and(|c| c.is_alphabetic())
        })
        .filter_map(|m| m.as_str().replace(',', ".").parse().ok())
        .collect()
}

pub fn last_standalone_number(text: &str) -> Option<f64> {
    standalone_numbers(text).pop()
}
