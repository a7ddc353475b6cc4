//! `mixcode simulate`: run a keyed ARQ session and write the transcript
//! an eavesdropper would capture plus a per-transmission summary.

use crate::fail::Failure;
use crate::fileio::{load_ecc, load_key, load_state_matrix, read_matrix, write_text};
use crate::manifest::RunManifest;
use mixcode::channel::{
    records_to_text, run_session, summary_csv, Error as ChannelError, PlaintextSource,
    SessionConfig, SessionMeta,
};
use mixcode::homophonic::{HomophonicCode, SystemParams};
use mixcode::keystream::LinearKeystream;
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Crossover probability of the wire channel.
    #[arg(long)]
    p: f64,
    /// Number of plaintext blocks to deliver.
    #[arg(long)]
    tau: usize,
    /// Session seed driving plaintext, randomness, and noise draws.
    #[arg(long)]
    seed: u64,
    /// Plaintext source: `zero` (chosen-plaintext) or `random`.
    #[arg(long, default_value = "zero")]
    mode: PlaintextSource,
    /// Mixing matrix file.
    #[arg(long)]
    code: PathBuf,
    /// Plaintext bits per block.
    #[arg(long)]
    l: usize,
    /// Error-correcting code: `hamming74` or a generator matrix file.
    #[arg(long, default_value = "hamming74")]
    ecc: String,
    /// Session key file (one line of bits).
    #[arg(long, conflicts_with = "key_seed", required_unless_present = "key_seed")]
    key: Option<PathBuf>,
    /// Derive the session key from this seed instead.
    #[arg(long)]
    key_seed: Option<u64>,
    /// State matrix file.
    #[arg(long, conflicts_with = "s_seed", required_unless_present = "s_seed")]
    s: Option<PathBuf>,
    /// Derive the state matrix from this seed instead.
    #[arg(long)]
    s_seed: Option<u64>,
    /// Attempt cap per block.
    #[arg(long, default_value_t = 1000)]
    max_retries: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let g_h = read_matrix(&args.code)?;
    let ecc = load_ecc(&args.ecc)?;
    let (m, n) = (ecc.message_len(), ecc.codeword_len());
    if g_h.rows() != m || g_h.cols() != m {
        return Err(Failure::Input(format!(
            "{}: expected a {m}x{m} matrix, got {}x{}",
            args.code.display(),
            g_h.rows(),
            g_h.cols()
        )));
    }
    let params = SystemParams::new(n, m, args.l, 0, args.p).map_err(Failure::input)?;
    let code = HomophonicCode::from_matrix(g_h, args.l, 0).map_err(Failure::input)?;
    let s = load_state_matrix(args.s.as_ref(), args.s_seed, n)?;
    let key = load_key(args.key.as_ref(), args.key_seed, n)?;
    let mut ks = LinearKeystream::new(s, key).map_err(Failure::input)?;

    let cfg = SessionConfig {
        params,
        seed: args.seed,
        tau: args.tau,
        max_retries: args.max_retries,
        plaintext_source: args.mode,
    };
    let records = run_session(&cfg, &code, &ecc, &mut ks).map_err(|e| match e {
        ChannelError::RetryExhausted { .. } => Failure::Protocol(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;

    let meta = SessionMeta { l: args.l, m, n, p: args.p, seed: args.seed, mode: args.mode };
    std::fs::create_dir_all(&args.out)?;
    write_text(&args.out.join("records.txt"), &records_to_text(&meta, &records))?;
    write_text(&args.out.join("summary.csv"), &summary_csv(&records))?;

    RunManifest::new(
        "simulate",
        json!({
            "n": n,
            "m": m,
            "l": args.l,
            "p": args.p,
            "tau": args.tau,
            "seed": args.seed,
            "mode": args.mode.to_string(),
            "code": args.code,
            "ecc": args.ecc,
            "key": args.key,
            "key_seed": args.key_seed,
            "s": args.s,
            "s_seed": args.s_seed,
            "max_retries": args.max_retries,
            "out": args.out,
        }),
    )
    .write(&args.out)
}
