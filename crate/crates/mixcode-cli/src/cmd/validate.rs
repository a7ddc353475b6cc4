//! `mixcode validate`: evaluate the construction criteria for a stored
//! code, printing the report as JSON.

use crate::fail::Failure;
use crate::fileio::{load_ecc, read_matrix, report_to_json};
use crate::manifest::RunManifest;
use mixcode::homophonic::evaluate_criteria;
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Candidate mixing matrix file.
    #[arg(long)]
    code: PathBuf,
    /// Error-correcting code: `hamming74` or a generator matrix file.
    #[arg(long, default_value = "hamming74")]
    ecc: String,
    /// Plaintext bits per block (split position inside the matrix).
    #[arg(long)]
    l: usize,
    /// Mixing weight the criteria are checked against.
    #[arg(long, default_value_t = 1)]
    w: usize,
    /// Directory for the run manifest.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let g_h = read_matrix(&args.code)?;
    let ecc = load_ecc(&args.ecc)?;
    let m = ecc.message_len();
    if g_h.rows() != m || g_h.cols() != m {
        return Err(Failure::Input(format!(
            "{}: expected a {m}x{m} matrix, got {}x{}",
            args.code.display(),
            g_h.rows(),
            g_h.cols()
        )));
    }
    if args.l == 0 || args.l >= m {
        return Err(Failure::Input(format!("l must satisfy 1 <= l < {m}")));
    }

    let report = evaluate_criteria(&g_h, args.l, args.w, &ecc);
    println!("{}", serde_json::to_string_pretty(&report_to_json(&report)).unwrap());

    std::fs::create_dir_all(&args.out)?;
    RunManifest::new(
        "validate",
        json!({
            "code": args.code,
            "ecc": args.ecc,
            "l": args.l,
            "w": args.w,
            "out": args.out,
        }),
    )
    .write(&args.out)?;

    if report.passes_strict {
        Ok(())
    } else {
        Err(Failure::Criteria)
    }
}
