/// Lightweight suffix stripper for the second matching stage of METEOR-lite.
///
/// Applies at most one rule, first match wins. The remaining stem must keep
/// at least three characters. Input is expected to be lowercase already.
pub fn stem(word: &str) -> &str {
    const RULES: &[&str] = &["ingly", "edly", "ness", "ment", "ing", "ies", "ied", "ed", "es", "ly", "s"];
    for suffix in RULES {
        if let Some(base) = word.strip_suffix(suffix) {
            if base.chars().count() < 3 {
                continue;
            }
            if *suffix == "s" && (base.ends_with('s') || base.ends_with('u')) {
                // "glass", "bus"
                return word;
            }
            return base;
        }
    }
    word
}
