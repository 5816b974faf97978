//! Deterministic token counter for compactness reports.
//!
//! A token is a maximal run of alphanumerics and underscores (a leading `-`
//! or `+` directly followed by a digit joins the run), or a single
//! punctuation character. Whitespace only separates.

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub fn count_tokens(source: &str) -> usize {
    let mut count = 0;
    let mut chars = source.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        count += 1;
        let starts_run = is_word(c)
            || ((c == '-' || c == '+') && chars.peek().is_some_and(|n| n.is_ascii_digit()));
        if starts_run {
            while chars.peek().is_some_and(|&n| is_word(n)) {
                chars.next();
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_canonical_rect() {
        assert_eq!(count_tokens("{rect [100, 100, 50, 150] hsl (10, 15, 12)}"), 20);
    }

    #[test]
    fn trivial_inputs() {
        assert_eq!(count_tokens(""), 0);
        assert_eq!(count_tokens("   \n"), 0);
        assert_eq!(count_tokens("hsl"), 1);
    }

    #[test]
    fn signs_join_digits_only() {
        assert_eq!(count_tokens("-12"), 1);
        assert_eq!(count_tokens("- 12"), 2);
        assert_eq!(count_tokens("x-1"), 2);
        assert_eq!(count_tokens("a-b"), 3);
        assert_eq!(count_tokens("12.5"), 3);
        assert_eq!(count_tokens("font_size=\"10px\""), 5);
    }
}
