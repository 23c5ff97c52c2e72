use std::path::Path;

use matchgate_shadows::majorana::MajoranaMonomial;
use matchgate_shadows::{Error, Result};

/// Reads one monomial per line as space-separated Majorana indices. Blank
/// lines and lines starting with `#` are skipped.
pub fn read_observables(path: &Path, n_modes: usize) -> Result<Vec<MajoranaMonomial>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Data(format!("cannot read observables file {}: {e}", path.display())))?;
    parse_observables(&text, n_modes)
}

pub fn parse_observables(text: &str, n_modes: usize) -> Result<Vec<MajoranaMonomial>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let indices = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Data(format!("observables line {lineno}: invalid index '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if indices.len() % 2 != 0 {
            return Err(Error::Data(format!(
                "observables line {lineno}: odd-degree monomial '{line}' has no unbiased shadow estimator"
            )));
        }
        let m = MajoranaMonomial::new(n_modes, indices)
            .map_err(|e| Error::Data(format!("observables line {lineno}: {e}")))?;
        out.push(m);
    }
    if out.is_empty() {
        return Err(Error::Data("observables file lists no monomials".into()));
    }
    Ok(out)
}
