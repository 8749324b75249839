use clap::{Args, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use trs_core::axioms::{self, HarnessBudget, CLAUSES};
use trs_core::block_seq::BlockSequence;
use trs_core::echelon::EchelonSpace;
use trs_core::gapw::{self, GapSpace, GapWord, Symbol};
use trs_core::search::{self, SearchBudget, WitnessReport};
use trs_core::space::Coloring;
use trs_core::words_hj::{self, HjOutcome, Word, WordSeq};
use trs_core::{Error, Result, Space};

use crate::spaces::{coloring, AnySpace, CliSpace, SpaceArgs};
use crate::{read_json, with_space, Cmd, Output};

pub fn run(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::Enumerate { space, n, k } => with_space!(&AnySpace::build(&space)?, s => enumerate(s, n, k)),
        Cmd::Validate { space, input } => with_space!(&AnySpace::build(&space)?, s => validate(s, &input)),
        Cmd::Compose { space, a, b } => with_space!(&AnySpace::build(&space)?, s => compose(s, &a, &b)),
        Cmd::Project { space, k, input } => with_space!(&AnySpace::build(&space)?, s => {
            let a = s.parse(&read_json(&input)?)?;
            Ok(element(s, &s.project(&a, k)?))
        }),
        Cmd::Restrict { space, n, input } => with_space!(&AnySpace::build(&space)?, s => restrict(s, n, &input)),
        Cmd::SApprox { space, n, input } => with_space!(&AnySpace::build(&space)?, s => s_approx(s, n, &input)),
        Cmd::Le { space, b, a } => with_space!(&AnySpace::build(&space)?, s => le(s, &b, &a)),
        Cmd::LeFin { space, a, b } => with_space!(&AnySpace::build(&space)?, s => {
            let (a, b) = (s.parse(&read_json(&a)?)?, s.parse(&read_json(&b)?)?);
            Ok(truth("le_fin", s.le_fin(&a, &b)))
        }),
        Cmd::CheckAxioms { space, max_extent, max_k, clauses, budget } => {
            let b = HarnessBudget {
                max_k: max_k.unwrap_or(max_extent),
                max_instances: budget,
                ..HarnessBudget::new(max_extent)
            };
            with_space!(&AnySpace::build(&space)?, s => check(s, &b, &clauses))
        }
        Cmd::Search(args) => search_cmd(args),
        Cmd::Transfer { t, m, seq, words, coloring } => transfer(t, m, &seq, &words, &coloring),
        Cmd::HjSearch { alphabet, colors, length, budget } => hj(&alphabet, colors, length, budget),
        Cmd::FinConvert { to, rows, input } => fin_convert(to, rows, &input),
        Cmd::Gapw { op } => gapw_op(op),
        Cmd::Echelon { q, op } => echelon_op(q, op),
    }
}

fn element<S: CliSpace>(s: &S, a: &S::Elem) -> Output {
    let v = s.to_json(a);
    let summary = v.to_string();
    Output::new(json!({ "space": s.id(), "result": v }), summary)
}

fn truth(name: &str, value: bool) -> Output {
    Output::new(json!({ name: value }), value.to_string()).csv(vec![vec![name.into()], vec![value.to_string()]])
}

fn flat(v: &Value) -> String {
    match v {
        Value::Array(xs) => xs.iter().map(flat).collect::<Vec<_>>().join(if xs.iter().all(Value::is_number) { " " } else { ";" }),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn enumerate<S: CliSpace>(s: &S, n: usize, k: usize) -> Result<Output> {
    let records: Vec<Value> = s.enumerate(n, k).iter().map(|a| s.to_json(a)).collect();
    let mut rows = vec![vec!["index".to_string(), "n".into(), "k".into(), "data".into()]];
    for (i, r) in records.iter().enumerate() {
        let data = r.get("data").or_else(|| r.get("entries")).unwrap_or(&Value::Null);
        rows.push(vec![i.to_string(), n.to_string(), k.to_string(), flat(data)]);
    }
    let summary = format!("{}: {} values with n = {n}, k = {k}", s.id(), records.len());
    Ok(Output::new(
        json!({ "command": "enumerate", "space": s.id(), "n": n, "k": k, "count": records.len(), "records": records }),
        summary,
    )
    .csv(rows))
}

fn validate<S: CliSpace>(s: &S, input: &str) -> Result<Output> {
    let v = read_json(input)?;
    Ok(match s.parse(&v) {
        Ok(_) => Output::new(json!({ "valid": true, "space": s.id() }), "valid"),
        Err(Error::Invalid { what, condition, detail }) => Output::new(
            json!({ "valid": false, "space": s.id(), "what": what, "condition": condition, "detail": detail }),
            format!("invalid {what}: condition {condition} violated ({detail})"),
        )
        .code(1),
        Err(e) => return Err(e),
    })
}

fn compose<S: CliSpace>(s: &S, a: &str, b: &str) -> Result<Output> {
    let (a, b) = (s.parse(&read_json(a)?)?, s.parse(&read_json(b)?)?);
    Ok(element(s, &s.compose(&a, &b)?))
}

fn restrict<S: CliSpace>(s: &S, n: usize, input: &str) -> Result<Output> {
    let a = s.parse(&read_json(input)?)?;
    Ok(element(s, &s.restrict(n, &a)?))
}

fn s_approx<S: CliSpace>(s: &S, n: Option<usize>, input: &str) -> Result<Output> {
    let x = s.parse(&read_json(input)?)?;
    match n {
        Some(n) => Ok(element(s, &s.s_approx(n, &x)?)),
        None => {
            let seq: Vec<Value> =
                (0..s.s_count(&x)).map(|i| s.s_approx(i, &x).map(|y| s.to_json(&y))).collect::<Result<_>>()?;
            let summary = format!("{} approximations", seq.len());
            Ok(Output::new(json!({ "space": s.id(), "sequence": seq }), summary))
        }
    }
}

fn le<S: CliSpace>(s: &S, b: &str, a: &str) -> Result<Output> {
    let (b, a) = (s.parse(&read_json(b)?)?, s.parse(&read_json(a)?)?);
    Ok(truth("le", s.le(&b, &a)?))
}

fn check<S: CliSpace>(s: &S, budget: &HarnessBudget, clauses: &[String]) -> Result<Output> {
    let reports = if clauses.is_empty() {
        axioms::check_axioms(s, budget)
    } else {
        clauses
            .iter()
            .map(|c| {
                axioms::check_clause(s, c, budget)
                    .ok_or_else(|| Error::Parse(format!("unknown clause {c}; expected one of {}", CLAUSES.join(", "))))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let all_pass = reports.iter().all(|r| r.pass);
    let complete = reports.iter().all(|r| r.complete);
    let mut rows = vec![vec!["axiom".to_string(), "instances".into(), "violations".into(), "pass".into(), "complete".into()]];
    let mut lines = Vec::new();
    for r in &reports {
        rows.push(vec![
            r.axiom.clone(),
            r.instances.to_string(),
            r.violation_count.to_string(),
            r.pass.to_string(),
            r.complete.to_string(),
        ]);
        let verdict = if r.pass { "pass" } else { "FAIL" };
        let partial = if r.complete { "" } else { " (budget hit)" };
        lines.push(format!("{:4} {verdict} over {} instances{partial}", r.axiom, r.instances));
    }
    lines.push(format!("{}: all_pass = {all_pass}, complete = {complete}", s.id()));
    let code = if !all_pass {
        1
    } else if !complete {
        3
    } else {
        0
    };
    Ok(Output::new(
        json!({ "command": "check-axioms", "space": s.id(), "all_pass": all_pass, "complete": complete, "reports": reports }),
        lines.join("\n"),
    )
    .csv(rows)
    .code(code))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    A4,
    ApproxRamsey,
    Pigeonhole,
    Projected,
}

/// A search task. The same fields are read from a JSON job file:
///
/// ```json
/// {"mode": "a4", "space": {"name": "param", "t": 0}, "bound": {"identity": 5},
///  "coloring": "parity-len", "min_width": 2}
/// ```
#[derive(Debug, Clone, Deserialize)]
pub struct SearchJob {
    pub mode: Mode,
    pub space: SpaceArgs,
    /// An element, or `{"identity": n}`.
    pub bound: Value,
    #[serde(default)]
    pub stem: Option<Value>,
    #[serde(default)]
    pub k: Option<usize>,
    pub coloring: String,
    #[serde(default = "one")]
    pub min_width: usize,
    #[serde(default)]
    pub budget: Option<usize>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// JSON job file; when given, the other search flags are ignored.
    #[arg(long)]
    job: Option<String>,
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value = "a4")]
    mode: Mode,
    /// Bound element; defaults to the identity with `--n` classes.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Stem for a4 (default: the empty approximation).
    #[arg(long)]
    stem: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "parity-len")]
    coloring: String,
    #[arg(long, default_value_t = 1)]
    min_width: usize,
    /// Candidate ceiling.
    #[arg(long, env = "TRS_BUDGET", default_value_t = 1_000_000)]
    budget: usize,
}

impl SearchArgs {
    fn job(self) -> Result<(SearchJob, usize)> {
        if let Some(path) = &self.job {
            let job: SearchJob = serde_json::from_value(read_json(path)?)?;
            let budget = job.budget.unwrap_or(self.budget);
            return Ok((job, budget));
        }
        let bound = match (&self.bound, self.n) {
            (Some(b), _) => read_json(b)?,
            (None, Some(n)) => json!({ "identity": n }),
            (None, None) => return Err(Error::Parse("search needs --bound or --n".into())),
        };
        let stem = self.stem.as_deref().map(read_json).transpose()?;
        let job = SearchJob {
            mode: self.mode,
            space: self.space,
            bound,
            stem,
            k: self.k,
            coloring: self.coloring,
            min_width: self.min_width,
            budget: None,
        };
        Ok((job, self.budget))
    }
}

fn bound_of<S: CliSpace>(s: &S, v: &Value) -> Result<S::Elem> {
    match v.get("identity").and_then(Value::as_u64) {
        Some(n) => Ok(s.identity(n as usize)),
        None => s.parse(v),
    }
}

fn search_cmd(args: SearchArgs) -> Result<Output> {
    let (job, max_nodes) = args.job()?;
    let budget = SearchBudget { min_width: job.min_width, max_nodes };
    let space = AnySpace::build(&job.space)?;
    let report = match (&space, job.mode) {
        (AnySpace::Gap(s), Mode::Pigeonhole) => {
            let color = coloring(s, &job.coloring)?;
            search::pigeonhole_demo(s, &bound_of(s, &job.bound)?, &*color, &budget)?
        }
        (_, Mode::Pigeonhole) => return Err(Error::Domain("pigeonhole search runs on gapw only".into())),
        _ => with_space!(&space, s => run_search(s, &job, &budget)?),
    };
    let code = match (report.found, report.verified, report.exhausted) {
        (true, true, _) => 0,
        (true, false, _) => 1,
        (false, _, true) => 2,
        (false, _, false) => 3,
    };
    Ok(search_output(report).code(code))
}

fn run_search<S: CliSpace>(s: &S, job: &SearchJob, budget: &SearchBudget) -> Result<WitnessReport> {
    let b = bound_of(s, &job.bound)?;
    let color = coloring(s, &job.coloring)?;
    let need_k = || job.k.ok_or_else(|| Error::Parse("this mode needs --k".into()));
    match job.mode {
        Mode::A4 => {
            let stem = job.stem.as_ref().map(|v| s.parse(v)).transpose()?.unwrap_or_else(|| s.empty());
            search::a4_witness(s, &stem, &b, &*color, budget)
        }
        Mode::ApproxRamsey => search::approx_ramsey(s, &b, need_k()?, &*color, budget),
        Mode::Projected => search::projected_demo(s, &b, need_k()?, &*color, budget),
        Mode::Pigeonhole => unreachable!("dispatched before"),
    }
}

fn search_output(r: WitnessReport) -> Output {
    let rows = vec![
        vec!["mode".into(), "space".into(), "found".into(), "exhausted".into(), "verified".into(), "nodes".into(), "candidates".into()],
        vec![
            r.mode.clone(),
            r.space.clone(),
            r.found.to_string(),
            r.exhausted.to_string(),
            r.verified.to_string(),
            r.nodes_explored.to_string(),
            r.candidates.to_string(),
        ],
    ];
    let summary = r.summary();
    let mut v = serde_json::to_value(&r).expect("report serializes");
    v["command"] = json!("search");
    Output::new(v, summary).csv(rows)
}

fn words_arg(s: &str) -> Vec<Word> {
    s.split(',').map(str::trim).filter(|w| !w.is_empty()).map(Word::new).collect()
}

fn transfer(t: usize, m: usize, seq: &str, words: &str, name: &str) -> Result<Output> {
    let base = words_arg(seq);
    let alphabet = words_hj::transfer_alphabet(t, m);
    let seq = WordSeq::new(&alphabet, base)?;
    let a = GapWord::identity(t, m, seq.base().len());
    let images: Vec<GapWord> =
        gapw::symbols(&a, false).iter().filter_map(|sym| gapw::symbol_to_function(sym, &a).ok()).collect();
    let color = |f: &GapWord| -> usize {
        match name {
            "support-parity" => (t..f.rows()).filter(|&i| f.row(i).iter().any(|&c| c >= t)).count() % 2,
            _ => gapw::decode(f, &a).map_or(0, |sym| sym.terms().len() % 2),
        }
    };
    if !matches!(name, "terms-parity" | "support-parity") {
        return Err(Error::Parse(format!("unknown transfer coloring {name:?}")));
    }
    let c = Coloring::from_fn(2, images, color)?;
    let words = words_arg(words);
    let cp = words_hj::transfer_coloring(&c, &seq, &a, &words)?;
    let mut rows = vec![vec!["word".to_string(), "in_span".into(), "color".into()]];
    let mut records = Vec::new();
    for w in &words {
        let d = seq.decompose(w);
        let color = cp.get(w).unwrap_or(0);
        rows.push(vec![w.to_string(), d.is_some().to_string(), color.to_string()]);
        let terms: Option<Vec<Value>> = d.map(|d| d.iter().map(|&(n, l)| json!([n, l.to_string()])).collect());
        records.push(json!({ "word": w.to_string(), "decomposition": terms, "color": color }));
    }
    let summary = records.iter().map(|r| format!("{} -> {}", r["word"].as_str().unwrap_or(""), r["color"])).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json!({ "command": "transfer", "alphabet": alphabet.iter().collect::<String>(), "words": records }), summary).csv(rows))
}

fn hj(alphabet: &str, colors: usize, length: usize, budget: usize) -> Result<Output> {
    let letters: Vec<char> = alphabet.chars().collect();
    let outcome = words_hj::hj_line_search(&letters, colors, length, budget as u64)?;
    let summary = match &outcome {
        HjOutcome::EveryColoringHasLine { colorings } => {
            format!("every one of {colorings} colorings of length {length} has a monochromatic line")
        }
        HjOutcome::Defeated { coloring } => format!("coloring without a monochromatic line: {coloring:?}"),
    };
    let mut v = serde_json::to_value(&outcome).expect("outcome serializes");
    v["command"] = json!("hj-search");
    v["alphabet"] = json!(alphabet);
    v["length"] = json!(length);
    v["colors"] = json!(colors);
    Ok(Output::new(v, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FinTarget {
    Gapw,
    Fin,
}

fn fin_convert(to: FinTarget, rows: Option<usize>, input: &str) -> Result<Output> {
    let v = read_json(input)?;
    match to {
        FinTarget::Gapw => {
            let seq: BlockSequence = serde_json::from_value(v)?;
            let rows = rows.ok_or_else(|| Error::Parse("--to gapw needs --rows".into()))?;
            let a = seq.to_gapword(rows)?;
            let s = GapSpace::new(1, a.m())?;
            Ok(element(&s, &a))
        }
        FinTarget::Fin => {
            let a = gapw::from_json(&v)?;
            let seq = BlockSequence::from_gapword(&a)?;
            let out = serde_json::to_value(&seq).expect("sequence serializes");
            Ok(Output::new(json!({ "result": out }), out.to_string()))
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum GapwOp {
    /// `s_{l,n}(A)`: the cells of class `n` pushed `l` columns left.
    Tetris {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        input: String,
    },
    /// The function of a symbol `l:n,l:n,…` over `A`.
    SymbolEncode {
        #[arg(long)]
        terms: String,
        input: String,
    },
    /// The symbol of a one-class word `F` over `A`, if any.
    Decode { f: String, a: String },
    /// `B ≤ A` through brackets of symbol images.
    Le {
        b: String,
        a: String,
        #[arg(long, default_value_t = 100_000)]
        max_symbols: usize,
    },
    /// `A ≤_fin B`.
    LeFin { a: String, b: String },
}

fn gap(arg: &str) -> Result<GapWord> {
    gapw::from_json(&read_json(arg)?)
}

fn parse_terms(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (l, n) = p.trim().split_once(':').ok_or_else(|| Error::Parse(format!("term {p:?} is not l:n")))?;
            let num = |x: &str| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad number {x:?}")));
            Ok((num(l)?, num(n)?))
        })
        .collect()
}

fn gapw_op(op: GapwOp) -> Result<Output> {
    match op {
        GapwOp::Tetris { l, n, input } => {
            let a = gap(&input)?;
            let cells: Vec<(usize, usize)> = gapw::s_op(l, n, &a)?.0.into_iter().collect();
            Ok(Output::new(json!({ "cells": cells }), format!("{cells:?}")))
        }
        GapwOp::SymbolEncode { terms, input } => {
            let a = gap(&input)?;
            let sym = Symbol::new(a.t(), a.m(), parse_terms(&terms)?)?;
            let f = gapw::symbol_to_function(&sym, &a)?;
            Ok(element(&GapSpace::new(a.t(), a.m())?, &f))
        }
        GapwOp::Decode { f, a } => {
            let (f, a) = (gap(&f)?, gap(&a)?);
            let terms = gapw::decode(&f, &a).map(|s| s.terms().to_vec());
            Ok(Output::new(json!({ "symbol": terms }), format!("{terms:?}")))
        }
        GapwOp::Le { b, a, max_symbols } => {
            let outcome = gapw::le(&gap(&b)?, &gap(&a)?, max_symbols);
            let v = serde_json::to_value(outcome).expect("outcome serializes");
            let code = if outcome == gapw::LeOutcome::Indeterminate { 3 } else { 0 };
            Ok(Output::new(json!({ "le": v }), v.to_string()).code(code))
        }
        GapwOp::LeFin { a, b } => {
            let (a, b) = (gap(&a)?, gap(&b)?);
            let s = GapSpace::new(a.t(), a.m())?;
            Ok(truth("le_fin", s.le_fin(&a, &b)))
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum EchelonOp {
    /// Check the reduced-echelon conditions.
    Check { input: String },
    Compose { a: String, b: String },
    /// `B ≤ A`.
    Le { b: String, a: String },
    Restrict {
        #[arg(long)]
        n: usize,
        input: String,
    },
}

fn echelon_op(q: usize, op: EchelonOp) -> Result<Output> {
    let s = EchelonSpace::new(q)?;
    match op {
        EchelonOp::Check { input } => validate(&s, &input),
        EchelonOp::Compose { a, b } => compose(&s, &a, &b),
        EchelonOp::Le { b, a } => le(&s, &b, &a),
        EchelonOp::Restrict { n, input } => restrict(&s, n, &input),
    }
}
