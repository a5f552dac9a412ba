//! Plain-text field format: a `# nx ny x_min x_max y_min y_max` header line
//! followed by `ny` comma-separated rows of `nx` values (row `j` is `y_j`).
//! Values are written with the shortest round-trip decimal, so
//! write/read is bit-exact.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::{Grid2D, ScalarField2D};

pub fn write_field<W: Write>(field: &ScalarField2D, mut out: W) -> Result<()> {
    let g = field.grid();
    writeln!(
        out,
        "# {} {} {:?} {:?} {:?} {:?}",
        g.nx(),
        g.ny(),
        g.x_min(),
        g.x_max(),
        g.y_min(),
        g.y_max()
    )?;
    for row in field.values().chunks(g.nx()) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_field<R: BufRead>(input: R) -> Result<ScalarField2D> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))??;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("field header must start with '#'".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 6 {
        return Err(Error::Parse(format!(
            "field header needs 6 entries, found {}",
            parts.len()
        )));
    }
    let size = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::Parse(format!("header count {s:?}: {e}")))
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("header bound {s:?}: {e}")))
    };
    let grid = Grid2D::new(
        size(parts[0])?,
        size(parts[1])?,
        num(parts[2])?,
        num(parts[3])?,
        num(parts[4])?,
        num(parts[5])?,
    )?;
    let mut values = Vec::with_capacity(grid.len());
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for tok in line.split(',') {
            let v = tok.trim().parse::<f64>().map_err(|e| {
                Error::Parse(format!("line {}: value {tok:?}: {e}", lineno + 2))
            })?;
            values.push(v);
        }
    }
    ScalarField2D::new(grid, values)
}
