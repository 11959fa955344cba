//! Line-oriented complex format: one maximal simplex per line, vertex labels
//! separated by whitespace. `#` starts a comment; blank lines are skipped.

use super::{SimplicialComplex, SkeletonError};

pub fn parse_complex(src: &str) -> Result<SimplicialComplex, SkeletonError> {
    let mut simplices = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut labels: Vec<String> = Vec::new();
        let mut col = 0;
        for tok in line.split_inclusive(char::is_whitespace) {
            let word = tok.trim_end();
            if !word.is_empty() {
                if labels.iter().any(|l| l == word) {
                    return Err(SkeletonError::Parse {
                        line: lineno + 1,
                        col: col + 1,
                        message: format!("vertex {word:?} repeated in simplex"),
                    });
                }
                if word.contains(|c: char| c.is_control()) {
                    return Err(SkeletonError::Parse { line: lineno + 1, col: col + 1, message: "control character in label".into() });
                }
                labels.push(word.to_string());
            }
            col += tok.chars().count();
        }
        if !labels.is_empty() {
            simplices.push(labels);
        }
    }
    if simplices.is_empty() {
        return Err(SkeletonError::Parse { line: 1, col: 1, message: "no simplices".into() });
    }
    SimplicialComplex::from_labelled(&simplices)
}

/// Sorted output: each simplex in vertex order, lines in index order.
pub fn write_complex(k: &SimplicialComplex) -> String {
    let mut out = String::new();
    for s in k.maximal() {
        out.push_str(&k.simplex_labels(s).join(" "));
        out.push('\n');
    }
    out
}
