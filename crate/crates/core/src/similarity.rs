//! Character trigram similarity.

use std::collections::HashMap;

/// Statements with this similarity or less count as textually unrelated.
pub const SIM_THRESHOLD: f64 = 0.618;

fn trigrams(s: &str) -> HashMap<&str, usize> {
    let idx: Vec<usize> = s.char_indices().map(|(i, _)| i).chain([s.len()]).collect();
    let n = idx.len() - 1;
    let mut out = HashMap::new();
    if n == 0 {
        return out;
    }
    if n < 3 {
        *out.entry(s).or_default() += 1;
        return out;
    }
    for w in 0..=n - 3 {
        *out.entry(&s[idx[w]..idx[w + 3]]).or_default() += 1;
    }
    out
}

/// Dice coefficient over the multisets of character 3-grams. Strings shorter
/// than three characters count as a single gram. Two empty strings are
/// identical.
pub fn trigram_similarity(a: &str, b: &str) -> f64 {
    if a == b {
        return 1.0;
    }
    let (ga, gb) = (trigrams(a), trigrams(b));
    let total: usize = ga.values().sum::<usize>() + gb.values().sum::<usize>();
    if total == 0 {
        return 0.0;
    }
    let shared: usize = ga
        .iter()
        .map(|(g, &n)| n.min(gb.get(g).copied().unwrap_or(0)))
        .sum();
    2.0 * shared as f64 / total as f64
}

/// Collapses runs of whitespace to a single space and trims the ends.
pub fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
