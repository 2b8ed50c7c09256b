use anyhow::{bail, Result};
use edgetri::enumerate::{enumerate_with, polynomial_from_table, with_zeros, MAX_ENUMERATION_N};
use edgetri::CountTable;
use serde_json::json;

use crate::args::{check_n, EnumerateArgs};
use crate::output::{metadata, Format, Sink};
use crate::Outcome;

pub fn run(a: EnumerateArgs) -> Result<Outcome> {
    check_n("n", a.n)?;
    if a.n > MAX_ENUMERATION_N {
        bail!("n: enumeration is limited to n ≤ {MAX_ENUMERATION_N} (got {})", a.n);
    }
    if a.zeros && a.output.format == Format::Csv {
        bail!("zeros: only available with --format json");
    }
    let params = a.params.params()?;
    let table = CountTable::build(a.n)?;
    let result = enumerate_with(&table, params);
    let mut meta = metadata("enumerate", &a)?;
    let sink = Sink::open(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            meta["summary"] = json!({
                "log_partition": result.log_partition,
                "expected_edge_count": result.expected_edge_count,
                "expected_triangle_count": result.expected_triangle_count,
            });
            let rows: Vec<(usize, f64)> = result.edge_count_law.iter().copied().enumerate().collect();
            sink.write_csv(&meta, &["edges", "probability"], &rows)?;
        }
        Format::Json => {
            let mut poly = polynomial_from_table(&table, params.alpha);
            if a.zeros {
                poly = with_zeros(poly)?;
            }
            sink.write_json(meta, json!({ "result": result, "polynomial": poly }))?;
        }
    }
    Ok(Outcome::Pass)
}
