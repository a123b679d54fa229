//! Staged verification of the length-128 claims for the fixture code and R(3,7).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use sdcode::analysis::{derived_design, intersection_spectrum, min_weight_design, neighbor_test, two_rank};
use sdcode::enumeration::{low_weight_enumerate_with, EnumerationOptions};
use sdcode::geometry::verify_t_design;
use sdcode::gleason::{expand, fit, macwilliams_check, reed_muller_3_7_distribution};
use sdcode::{LinearCode, LowWeightReport, Result, WeightDistribution};

const N: usize = 128;
const K: usize = 64;
const D: usize = 16;
const A16: u32 = 94488;
const LAMBDA: u64 = 155;
const DERIVED_BLOCKS: usize = 11811;
const INTERSECTIONS: [usize; 3] = [1, 3, 7];
const TWO_RANK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Cstar,
    Rm37,
    All,
}

pub fn default_fixture() -> PathBuf {
    let local = PathBuf::from("data/bordered_genmatrix.txt");
    if local.exists() {
        local
    } else {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/bordered_genmatrix.txt")
    }
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub subject: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status}  {:<6} {}", self.subject, self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub claims: Vec<Claim>,
}

impl Outcome {
    pub fn first_failure(&self) -> Option<&Claim> {
        self.claims.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        let claims: Vec<Value> = self
            .claims
            .iter()
            .map(|c| json!({ "subject": c.subject, "claim": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        json!({
            "passed": self.first_failure().is_none(),
            "first_failure": self.first_failure().map(|c| format!("{}: {}", c.subject, c.name)),
            "claims": claims,
        })
    }
}

struct Recorder<'a> {
    outcome: Outcome,
    sink: &'a mut dyn FnMut(&Claim),
}

impl Recorder<'_> {
    /// Records one claim; returns whether it passed.
    fn claim(
        &mut self,
        subject: &'static str,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        let c = Claim {
            subject,
            name: name.into(),
            passed,
            detail: detail.into(),
        };
        (self.sink)(&c);
        self.outcome.claims.push(c);
        passed
    }
}

struct Subject {
    name: &'static str,
    code: LinearCode,
    /// Coordinate whose removal leaves the unextended code.
    puncture: usize,
}

/// Runs every stage, stopping at the first failing claim.
pub fn run(
    target: Target,
    fixture: &Path,
    quick: bool,
    opts: &EnumerationOptions,
    mut sink: impl FnMut(&Claim),
) -> Result<Outcome> {
    let mut rec = Recorder {
        outcome: Outcome::default(),
        sink: &mut sink,
    };
    let mut completed = Vec::new();
    if matches!(target, Target::Cstar | Target::All) {
        let code = LinearCode::load_generator(fixture)?;
        let s = Subject {
            name: "cstar",
            code,
            puncture: N - 1,
        };
        match stages(&s, quick, opts, &mut rec)? {
            Some(w) => completed.push(w),
            None => return Ok(rec.outcome),
        }
    }
    if matches!(target, Target::Rm37 | Target::All) {
        let s = Subject {
            name: "rm37",
            code: LinearCode::reed_muller(3, 7)?,
            puncture: 0,
        };
        match stages(&s, quick, opts, &mut rec)? {
            Some(w) => completed.push(w),
            None => return Ok(rec.outcome),
        }
    }
    if let [a, b] = completed.as_slice() {
        rec.claim("both", "identical weight distributions", a == b, "");
    }
    Ok(rec.outcome)
}

macro_rules! require {
    ($rec:expr, $s:expr, $name:expr, $cond:expr, $detail:expr) => {
        if !$rec.claim($s.name, $name, $cond, $detail) {
            return Ok(None);
        }
    };
}

fn stages(
    s: &Subject,
    quick: bool,
    opts: &EnumerationOptions,
    rec: &mut Recorder,
) -> Result<Option<WeightDistribution>> {
    let c = &s.code;
    require!(
        rec,
        s,
        format!("[{N}, {K}] code"),
        (c.n(), c.k()) == (N, K),
        format!("[{}, {}]", c.n(), c.k())
    );
    require!(rec, s, "self-dual", c.is_self_dual(), "");
    require!(rec, s, "doubly-even", c.is_doubly_even(), "");

    log::info!("{}: enumerating codewords of weight <= {D}", s.name);
    let report = low_weight_enumerate_with(c, D, opts)?;
    let d = report.minimum_weight();
    require!(
        rec,
        s,
        format!("minimum distance {D}"),
        report.certified && d == Some(D),
        format!("d = {}", d.map_or("none".into(), |d| d.to_string()))
    );
    let a16 = report.count(D);
    require!(
        rec,
        s,
        format!("A16 = {A16}"),
        a16 == BigUint::from(A16),
        format!("A16 = {a16}")
    );

    let a20 = if quick {
        rec.claim(s.name, "A20 = 0", true, "assumed; checked by Gleason consistency below");
        BigUint::from(0u32)
    } else {
        log::info!("{}: certifying weight 20, this takes several minutes", s.name);
        let r20 = low_weight_enumerate_with(c, 20, opts)?;
        let a20 = r20.count(20);
        require!(
            rec,
            s,
            "A20 = 0",
            r20.certified && a20 == BigUint::from(0u32),
            format!("A20 = {a20}")
        );
        a20
    };

    let completed = gleason_completion(&report, a20);
    let table = reed_muller_3_7_distribution();
    let (ok, detail) = match &completed {
        Ok(w) if *w == table => (
            macwilliams_check(w, K),
            "matches the R(3,7) table, MacWilliams identity holds".to_string(),
        ),
        Ok(_) => (false, "differs from the R(3,7) table".to_string()),
        Err(e) => (false, e.to_string()),
    };
    require!(rec, s, "Gleason completion", ok, detail);

    let mwd = min_weight_design(c, &report)?;
    let lambda3 = verify_t_design(&mwd.design, 3)?.lambda();
    require!(
        rec,
        s,
        format!("weight-{D} supports form a 3-({N},{D},{LAMBDA}) design"),
        lambda3 == Some(LAMBDA) && mwd.design.block_count() == A16 as usize,
        format!("lambda = {lambda3:?}")
    );
    require!(
        rec,
        s,
        "weight-16 words span the code",
        mwd.spans_code,
        format!("rank {}", mwd.rank)
    );

    let derived = derived_design(&mwd.design, s.puncture)?;
    let lambda2 = verify_t_design(&derived, 2)?.lambda();
    require!(
        rec,
        s,
        format!("weight-15 words of the punctured code form a 2-(127,15,{LAMBDA}) design"),
        derived.block_count() == DERIVED_BLOCKS && lambda2 == Some(LAMBDA),
        format!("{} blocks, lambda = {lambda2:?}", derived.block_count())
    );
    let spectrum = intersection_spectrum(&derived)?;
    require!(
        rec,
        s,
        "block intersections {1, 3, 7}",
        spectrum.support() == INTERSECTIONS,
        format!("{:?}", spectrum.counts)
    );
    let rank = two_rank(&derived);
    require!(
        rec,
        s,
        format!("2-rank {TWO_RANK}"),
        rank == TWO_RANK,
        format!("2-rank {rank}")
    );

    let verdict = neighbor_test(c, D, &report)?;
    require!(
        rec,
        s,
        "neighbor system inconsistent, ranks (64, 65)",
        !verdict.solvable && (verdict.rank_m, verdict.rank_m_aug) == (64, 65),
        format!("({}, {}): {}", verdict.rank_m, verdict.rank_m_aug, verdict.conclusion())
    );
    Ok(completed.ok())
}

fn gleason_completion(report: &LowWeightReport, a20: BigUint) -> Result<WeightDistribution> {
    let mut known: BTreeMap<usize, BigInt> = (0..=D).step_by(4).map(|w| (w, BigInt::from(report.count(w)))).collect();
    known.insert(20, BigInt::from(a20));
    expand(&fit(N, &known)?)
}
