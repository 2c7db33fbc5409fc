//! Run every family of the verification suite and print the table.

use nstrees::bounds::write_table;
use nstrees::series::Mutation;
use nstrees::spectral::{GridSpec, InitialKind};
use nstrees::suite::{run_suite, SuiteInput};
use nstrees::treelib::TreeClassParams;

fn main() -> nstrees::Result<()> {
    let input = SuiteInput {
        spec: GridSpec::new(5.0, 11, 2.0, 33, 2.0)?,
        kind: InitialKind::RandomDivfree,
        amplitude: 0.1,
        seed: 7,
        size_cap: 5,
        class: TreeClassParams::new(0.45, 0.06)?,
        mutation: Mutation::None,
    };
    let reports = run_suite(&input, &[])?;
    write_table(std::io::stdout().lock(), &reports)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} reports, {failed} failed", reports.len());
    Ok(())
}
