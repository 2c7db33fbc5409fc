use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// A measured quantity against its analytic upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Report family, used by suite filters.
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    /// `bound - measured`
    pub margin: f64,
    /// Allowed negative margin.
    pub slack: f64,
    pub pass: bool,
    /// Tree, time, wavevector or parameters the report refers to.
    pub context: String,
}

impl BoundReport {
    /// Passes iff `measured <= bound + slack` and both are finite or the
    /// bound is `+inf`.
    pub fn upper(name: &str, measured: f64, bound: f64, slack: f64, context: String) -> Self {
        let margin = bound - measured;
        let pass = !measured.is_nan() && !bound.is_nan() && margin >= -slack;
        BoundReport {
            name: name.to_string(),
            measured,
            bound,
            margin,
            slack,
            pass,
            context,
        }
    }

    /// A yes/no check reported as `measured = 0 or 1` against `bound = 1`.
    pub fn flag(name: &str, ok: bool, context: String) -> Self {
        let mut r = BoundReport::upper(name, if ok { 0.0 } else { 2.0 }, 1.0, 0.0, context);
        r.pass = ok;
        r
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<18} measured {:>12.5e}  bound {:>12.5e}  margin {:>12.5e}  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.bound,
            self.margin,
            self.context
        )
    }
}

pub fn write_json<W: Write>(w: W, reports: &[BoundReport]) -> Result<()> {
    serde_json::to_writer_pretty(w, reports)?;
    Ok(())
}

/// One line per report plus a summary line.
pub fn write_table<W: Write>(mut w: W, reports: &[BoundReport]) -> Result<()> {
    for r in reports {
        writeln!(w, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(w, "{} reports, {} failed", reports.len(), failed)?;
    Ok(())
}
