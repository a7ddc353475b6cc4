//! `mixcode build`: construct a mixing code and write its matrices plus
//! a criteria report.

use crate::fail::Failure;
use crate::fileio::{load_ecc, report_to_json, write_text};
use crate::manifest::RunManifest;
use mixcode::homophonic::{HomophonicCode, SystemParams};
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Plaintext bits per block.
    #[arg(long)]
    l: usize,
    /// Encoder input length; defaults to the ECC message length.
    #[arg(long)]
    m: Option<usize>,
    /// Mixing weight target.
    #[arg(long, default_value_t = 1)]
    w: usize,
    /// Error-correcting code: `hamming74` or a generator matrix file.
    #[arg(long, default_value = "hamming74")]
    ecc: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let ecc = load_ecc(&args.ecc)?;
    let m = args.m.unwrap_or_else(|| ecc.message_len());
    let params =
        SystemParams::new(ecc.codeword_len(), m, args.l, args.w, 0.0).map_err(Failure::input)?;
    if m != ecc.message_len() {
        return Err(Failure::Input(format!(
            "m = {m} does not match the ECC message length {}",
            ecc.message_len()
        )));
    }
    let code = HomophonicCode::build_generic(&params, &ecc).map_err(Failure::input)?;

    std::fs::create_dir_all(&args.out)?;
    write_text(&args.out.join("g_h.txt"), &code.g_h().to_text())?;
    write_text(&args.out.join("g_h_inv.txt"), &code.g_h_inv().to_text())?;
    write_text(&args.out.join("g.txt"), &code.compose(&ecc).to_text())?;
    let report = code.validate(&ecc);
    let mut report_text = serde_json::to_string_pretty(&report_to_json(&report)).unwrap();
    report_text.push('\n');
    write_text(&args.out.join("report.json"), &report_text)?;

    let manifest = RunManifest::new(
        "build",
        json!({
            "n": params.n,
            "m": params.m,
            "l": params.l,
            "w": params.w,
            "ecc": args.ecc,
            "out": args.out,
        }),
    );
    manifest.write(&args.out)
}
