//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every entry point takes script text and returns a JSON report string in
//! the same schema as the command-line tool, so the page needs no other glue.

use malmquist::frontend::{run, Command, Options, Outcome, Script};
use malmquist::nevanlinna::geometric_grid;
use wasm_bindgen::prelude::wasm_bindgen;

fn report(command: Command, script: &str, opts: &Options) -> String {
    let outcome = match Script::parse(script) {
        Ok(s) => run(command, &s, opts),
        Err(e) => Outcome::failed(command, opts, &e),
    };
    outcome.report.to_json()
}

/// Exact check that `w` solves the equation given by `a` and `rhs`.
#[wasm_bindgen]
pub fn verify(script: &str) -> String {
    report(Command::Verify, script, &Options::default())
}

/// Solution family for the linear form `rhs = a1 w + a0`.
#[wasm_bindgen]
pub fn synthesize(script: &str) -> String {
    report(Command::Synthesize, script, &Options::default())
}

/// Characteristic profile of `f - b` on a geometric grid, plus the zeros
/// inside the largest radius for plotting.
#[wasm_bindgen]
pub fn profile(script: &str, rmin: f64, rmax: f64, points: usize) -> String {
    let opts = match geometric_grid(rmin, rmax, points) {
        Ok(grid) => Options {
            grid,
            ..Options::default()
        },
        Err(e) => {
            return Outcome::failed(Command::Nevan, &Options::default(), &e)
                .report
                .to_json()
        }
    };
    report(Command::Nevan, script, &opts)
}
