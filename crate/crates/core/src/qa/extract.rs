//! Final-answer extraction from free-form model output.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected<'a> {
    Numeric,
    Label(&'a [String]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Extracted {
    Number(f64),
    Label(String),
    Unanswerable,
}

pub fn extract_final_answer(text: &str, expected: Expected<'_>) -> Extracted {
    match expected {
        Expected::Numeric => last_number(text).map_or(Extracted::Unanswerable, Extracted::Number),
        Expected::Label(labels) => {
            last_label(text, labels).map_or(Extracted::Unanswerable, |l| Extracted::Label(l.clone()))
        }
    }
}

/// Last numeric literal: optional sign, digits with optional `,ddd` groups,
/// optional decimals, optional trailing `%` (ignored).
pub fn last_number(text: &str) -> Option<f64> {
    let chars: Vec<char> = text.chars().collect();
    let mut last = None;
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        if i > 0 && is_word(chars[i - 1]) {
            // Digits glued to a word, as in `CO2` or `Q3`.
            while i < chars.len() && is_word(chars[i]) {
                i += 1;
            }
            continue;
        }
        let negative = i > 0
            && chars[i - 1] == '-'
            && (i == 1 || !(chars[i - 2].is_alphanumeric() || chars[i - 2] == '.'));
        let mut digits = String::new();
        let mut j = i;
        while j < chars.len() && chars[j].is_ascii_digit() {
            digits.push(chars[j]);
            j += 1;
        }
        while j + 3 < chars.len()
            && chars[j] == ','
            && chars[j + 1..j + 4].iter().all(char::is_ascii_digit)
            && !chars.get(j + 4).is_some_and(char::is_ascii_digit)
        {
            digits.extend(&chars[j + 1..j + 4]);
            j += 4;
        }
        if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
            digits.push('.');
            j += 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                digits.push(chars[j]);
                j += 1;
            }
        }
        if let Ok(v) = digits.parse::<f64>() {
            last = Some(if negative { -v } else { v });
        }
        i = j;
    }
    last
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Label whose last word-bounded, case-insensitive occurrence ends latest;
/// the longer label wins when two end at the same place.
pub fn last_label<'a>(text: &str, labels: &'a [String]) -> Option<&'a String> {
    let hay: Vec<char> = text.chars().flat_map(char::to_lowercase).collect();
    let mut best: Option<(usize, usize, &String)> = None;
    for label in labels {
        let needle: Vec<char> = label.chars().flat_map(char::to_lowercase).collect();
        if needle.is_empty() || needle.len() > hay.len() {
            continue;
        }
        for start in (0..=hay.len() - needle.len()).rev() {
            let end = start + needle.len();
            if hay[start..end] != needle[..] {
                continue;
            }
            let left_ok = start == 0 || !is_word(hay[start - 1]) || !is_word(needle[0]);
            let right_ok = end == hay.len() || !is_word(hay[end]) || !is_word(needle[needle.len() - 1]);
            if left_ok && right_ok {
                let better = match best {
                    None => true,
                    Some((e, len, _)) => end > e || (end == e && needle.len() > len),
                };
                if better {
                    best = Some((end, needle.len(), label));
                }
                break;
            }
        }
    }
    best.map(|(_, _, l)| l)
}
