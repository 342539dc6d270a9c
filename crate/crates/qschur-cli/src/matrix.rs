//! Compact matrix syntax: row-major brackets, `[[0,0,1],[0,1,0],[1,0,0]]`.
//! Anything that is not exactly a square, odd-sized, theta-symmetric integer
//! matrix is rejected.

use qschur::ThetaMatrix;

pub fn parse_matrix(s: &str, n: Option<usize>) -> Result<ThetaMatrix, String> {
    let t = s.trim();
    if !t.starts_with("[[") || !t.ends_with("]]") {
        return Err(format!("matrix `{s}`: expected row-major brackets like [[a,b,c],[d,e,f],[g,h,i]]"));
    }
    if let Some(bad) = t.chars().find(|c| !(c.is_ascii_digit() || "[],- ".contains(*c))) {
        return Err(format!("matrix `{s}`: unexpected character `{bad}`"));
    }
    let rows: Vec<Vec<i64>> = serde_json::from_str(t).map_err(|e| format!("matrix `{s}`: {e}"))?;
    let size = rows.len();
    if size < 3 || size % 2 == 0 {
        return Err(format!("matrix `{s}`: size {size} is not 2n+1 with n >= 1"));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != size) {
        return Err(format!("matrix `{s}`: row of length {} in a {size}x{size} matrix", r.len()));
    }
    let m = (size - 1) / 2;
    if let Some(n) = n {
        if n != m {
            return Err(format!("matrix `{s}`: size {size} does not match --n {n}"));
        }
    }
    ThetaMatrix::from_rows(m, &rows).map_err(|e| format!("matrix `{s}`: {e}"))
}

/// `1,3,2` -> `[1, 3, 2]`; letters must lie in `1..=letters`.
pub fn parse_word(s: &str, letters: usize) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            let r: usize = x.trim().parse().map_err(|_| format!("word `{s}`: `{x}` is not a letter"))?;
            if r == 0 || r > letters {
                return Err(format!("word `{s}`: letter {r} outside 1..={letters}"));
            }
            Ok(r)
        })
        .collect()
}
