//! Command dispatch and report assembly.

use northcott_core::error::Error;
use northcott_core::hilbert::{FitPolicy, HilbertRecord};
use northcott_core::length::TruncationPolicy;
use northcott_core::northcott::{
    dimension_one_report, northcott_report, HypothesisFlags, HypothesisReport, Verdict,
};
use northcott_core::omega::{j_one_depth_formula, ColonReading, Omega};
use northcott_core::oracle::{mon_colength, mon_pair_length, oracle_hilbert_coefficients, MonomialIdeal};
use northcott_core::reduction::Analysis;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::parser::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Generalized Hilbert-Samuel function and its fitted polynomial.
    Hilbert,
    /// j_0..j_d through every available route, with the agreement check.
    Coeffs,
    /// The j-multiplicity j_0 by the fit and by the length formula.
    Jmult,
    /// Analytic spread, a general minimal reduction and its reduction number.
    Reduction,
    /// Valabrega-Valla condition and the reduction ring sums.
    Depthcheck,
    /// The correction terms omega_n and the master identity.
    Omega,
    /// The generalized Northcott inequality and its equality case.
    Northcott,
    /// Combinatorial lengths and Hilbert coefficients of a monomial ideal.
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Hilbert => "hilbert",
            Command::Coeffs => "coeffs",
            Command::Jmult => "jmult",
            Command::Reduction => "reduction",
            Command::Depthcheck => "depthcheck",
            Command::Omega => "omega",
            Command::Northcott => "northcott",
            Command::Oracle => "oracle",
        }
    }

    fn needs_hypotheses(self) -> bool {
        matches!(
            self,
            Command::Coeffs | Command::Depthcheck | Command::Omega | Command::Northcott
        )
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub nmax: Option<usize>,
    pub truncation: TruncationPolicy,
    pub fit: FitPolicy,
    pub flags: HypothesisFlags,
    pub reading: ColonReading,
    pub oracle: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            nmax: None,
            truncation: TruncationPolicy::default(),
            fit: FitPolicy::default(),
            flags: HypothesisFlags::default(),
            reading: ColonReading::X1,
            oracle: false,
        }
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_HYPOTHESIS: u8 = 3;
pub const EXIT_UNSTABLE: u8 = 4;
pub const EXIT_CROSS_CHECK: u8 = 5;

/// Severity order used when several outcomes apply.
fn rank(code: u8) -> u8 {
    match code {
        EXIT_CROSS_CHECK => 4,
        EXIT_UNSTABLE => 3,
        EXIT_HYPOTHESIS => 2,
        EXIT_PARSE => 1,
        _ => 0,
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::NonStabilized(_) | Error::ComputationLimit { .. } | Error::RetriesExhausted { .. } => {
            EXIT_UNSTABLE
        }
        Error::CrossCheck(_) | Error::Division(_) | Error::ContextMismatch(_) => EXIT_CROSS_CHECK,
        Error::InvalidRing(_) | Error::BadCharacteristic(_) | Error::NotPolynomial { .. } => EXIT_PARSE,
        Error::InfiniteLength(_) | Error::Containment { .. } | Error::Precondition(_) => {
            EXIT_HYPOTHESIS
        }
    }
}

pub struct Outcome {
    pub report: Value,
    pub exit: u8,
}

struct Run<'a> {
    problem: &'a Problem,
    opts: &'a Options,
    exit: u8,
    diagnostics: Vec<String>,
    hypotheses: Value,
    j: Vec<i64>,
    routes: Map<String, Value>,
    northcott: Value,
    omega: Vec<Value>,
    extra: Map<String, Value>,
    passing: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

impl<'a> Run<'a> {
    fn raise(&mut self, code: u8) {
        if rank(code) > rank(self.exit) {
            self.exit = code;
        }
    }

    fn fail(&mut self, e: &Error) {
        self.diagnostics.push(e.to_string());
        self.raise(exit_for(e));
    }

    /// Reports a disagreement: hard when the hypotheses hold, informational otherwise.
    fn disagree(&mut self, what: String) {
        if self.passing {
            self.diagnostics.push(format!("cross-check failed: {what}"));
            self.raise(EXIT_CROSS_CHECK);
        } else {
            self.diagnostics
                .push(format!("{what} (hypothesis surrogates fail, not asserted)"));
        }
    }

    fn omega_nmax(&self, r: usize, d: usize) -> usize {
        self.opts.nmax.unwrap_or(r + d + 2)
    }

    fn hypotheses(&mut self, an: &mut Analysis, cmd: Command) -> Result<(), Error> {
        let h = HypothesisReport::compute(an, self.opts.flags)?;
        self.passing = h.inequality_applies();
        let mut m = Map::new();
        m.insert("d".into(), json!(h.d));
        m.insert("analytic_spread".into(), json!(h.analytic_spread));
        m.insert(format!("G{}", h.d), json!(h.surrogate_pass));
        m.insert("g_check".into(), json!("residual-height surrogate"));
        m.insert("residual_checks".into(), to_value(&h.residual_checks));
        m.insert("depth_condition".into(), json!(h.depth_condition));
        m.insert("asserted".into(), to_value(&h.flags));
        m.insert("omega_colon".into(), json!(self.opts.reading.name()));
        self.hypotheses = Value::Object(m);
        if cmd.needs_hypotheses() && !self.passing {
            let mut failed = vec![];
            if h.analytic_spread != h.d {
                failed.push(format!("analytic spread {} differs from d = {}", h.analytic_spread, h.d));
            }
            if !h.surrogate_pass {
                failed.push(format!("J does not satisfy G_{}", h.d));
            }
            self.diagnostics.push(format!("hypothesis surrogates fail: {}", failed.join(", ")));
            self.raise(EXIT_HYPOTHESIS);
        }
        Ok(())
    }

    fn set_j(&mut self, rec: &HilbertRecord) {
        self.j = rec.j.clone();
        self.routes.insert("fit".into(), json!(rec.j));
    }

    fn sum_route(&mut self, an: &mut Analysis, i: usize) -> Result<Option<i64>, Error> {
        let primary = self.opts.reading;
        let other = match primary {
            ColonReading::X1 => ColonReading::XNext,
            ColonReading::XNext => ColonReading::X1,
        };
        for reading in [primary, other] {
            match Omega::new(an, reading).j_via_sums(i, self.opts.fit.n_cap) {
                Ok(v) => {
                    if reading != primary {
                        self.diagnostics
                            .push(format!("omega sums for j_{i} used the {} colon reading", reading.name()));
                    }
                    return Ok(Some(v));
                }
                Err(e @ Error::Containment { .. }) => {
                    self.diagnostics.push(format!("{} reading, j_{i}: {e}", reading.name()));
                }
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    fn coeffs(&mut self, an: &mut Analysis, rec: &HilbertRecord) -> Result<(), Error> {
        let d = rec.d;
        let lemma: Vec<Option<i64>> = (0..=d).map(|i| (i > 0).then(|| rec.gap_sum(i))).collect();
        self.routes.insert("coefficient_sums".into(), json!(lemma));
        let mut sums: Vec<Option<i64>> = vec![None];
        for i in 1..=d {
            match self.sum_route(an, i) {
                Ok(v) => sums.push(v),
                Err(e) if !self.passing => {
                    self.diagnostics.push(format!("omega sums for j_{i}: {e}"));
                    sums.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        self.routes.insert("omega_sums".into(), json!(sums));
        if an.analytic_spread() == d {
            let jz = an.j_zero()?;
            self.routes.insert("length_formula".into(), json!([to_value(&jz)]));
            if jz.finite() != Some(rec.j[0] as u64) {
                self.disagree(format!("j_0 fit {} vs length formula {jz}", rec.j[0]));
            }
        }
        for i in 1..=d {
            for (name, v) in [("coefficient sums", lemma[i]), ("omega sums", sums[i])] {
                if let Some(v) = v {
                    if v != rec.j[i] {
                        self.disagree(format!("j_{i} fit {} vs {name} {v}", rec.j[i]));
                    }
                }
            }
        }
        Ok(())
    }

    fn oracle(&mut self, rec: Option<&HilbertRecord>) -> Result<(), Error> {
        if !self.problem.is_monomial() {
            self.diagnostics
                .push("the oracle needs monomial generators in a polynomial ring".into());
            self.raise(EXIT_PARSE);
            return Ok(());
        }
        let n = self.problem.vars.len();
        let gens = self
            .problem
            .gens
            .iter()
            .filter_map(|g| g.leading_monomial().map(|m| m.exponents().to_vec()))
            .collect();
        let mono = MonomialIdeal::new(n, gens);
        let sat = mono.saturate_maximal();
        let colength = mon_colength(&mono)?;
        let mut out = Map::new();
        out.insert("colength".into(), to_value(&colength));
        out.insert("torsion".into(), to_value(&mon_pair_length(&sat, &mono)?));
        out.insert("saturation".into(), json!(sat.gens()));
        if colength.finite().is_some() {
            let h = oracle_hilbert_coefficients(&mono)?;
            out.insert("counts".into(), json!(h.counts));
            out.insert("coefficients".into(), json!(h.coefficients));
            self.routes.insert("oracle".into(), json!(h.coefficients));
            if let Some(rec) = rec {
                if rec.j != h.coefficients {
                    self.disagree(format!("fitted j {:?} vs oracle {:?}", rec.j, h.coefficients));
                }
            }
        }
        self.extra.insert("oracle".into(), Value::Object(out));
        Ok(())
    }

    fn execute(&mut self, cmd: Command) -> Result<(), Error> {
        if cmd == Command::Oracle {
            return self.oracle(None);
        }
        let ideal = self.problem.ideal();
        let (mut an, r) = Analysis::new(&ideal, self.opts.seed, self.opts.truncation)?;
        self.hypotheses(&mut an, cmd)?;
        let d = an.d();
        let fit = self.opts.fit;
        let rec = match cmd {
            Command::Reduction => None,
            _ => {
                let rec = an.fit(&fit)?;
                self.set_j(&rec);
                Some(rec)
            }
        };
        match cmd {
            Command::Hilbert => {
                let rec = rec.as_ref().unwrap();
                self.extra.insert(
                    "hilbert".into(),
                    json!({"values": rec.values, "postulation": rec.postulation}),
                );
            }
            Command::Coeffs => self.coeffs(&mut an, rec.as_ref().unwrap())?,
            Command::Jmult => {
                let rec = rec.as_ref().unwrap();
                let formula = if an.analytic_spread() == d {
                    let v = an.j_zero()?;
                    if v.finite() != Some(rec.j[0] as u64) {
                        self.disagree(format!("j_0 fit {} vs length formula {v}", rec.j[0]));
                    }
                    to_value(&v)
                } else {
                    Value::Null
                };
                self.extra.insert(
                    "jmult".into(),
                    json!({"fit": rec.j[0], "length_formula": formula, "analytic_spread": an.analytic_spread()}),
                );
            }
            Command::Reduction => {
                let ctx = an.context().clone();
                let elements: Vec<String> =
                    an.reduction().elements().iter().map(|f| ctx.format_poly(f)).collect();
                self.extra.insert(
                    "reduction".into(),
                    json!({
                        "analytic_spread": an.analytic_spread(),
                        "reduction_number": r,
                        "elements": elements,
                    }),
                );
            }
            Command::Depthcheck => {
                let rec = rec.as_ref().unwrap();
                let nmax = self.omega_nmax(r, d);
                let vv = an.valabrega_valla(nmax, self.opts.flags.an_asserted)?;
                if !vv.equivalent {
                    self.disagree(format!(
                        "conditions (a) {} and (b) {} differ",
                        vv.condition_a, vv.condition_b
                    ));
                }
                let corrected = an.torsion_corrected_sum()?;
                if corrected != vv.e1_bar as i64 {
                    self.disagree(format!(
                        "torsion-corrected sum {corrected} vs e_1 of the reduction ring {}",
                        vv.e1_bar
                    ));
                }
                let depth_formula = j_one_depth_formula(&mut an)?;
                self.extra.insert(
                    "depth".into(),
                    json!({
                        "verified_up_to": nmax,
                        "valabrega_valla": to_value(&vv),
                        "torsion_corrected_sum": corrected,
                        "j1_depth_formula": depth_formula,
                        "j1_depth_formula_note": "assumes depth G >= d-1 and depth G/H0(G) = d",
                        "j1": rec.j.get(1),
                    }),
                );
            }
            Command::Omega => {
                let rec = rec.as_ref().unwrap();
                let nmax = self.omega_nmax(r, d);
                let mut om = Omega::new(&mut an, self.opts.reading);
                let mut breakdowns = Vec::new();
                for n in 0..=nmax {
                    breakdowns.push(to_value(&om.omega(n)?));
                }
                let checks = om.master_identity(rec, nmax)?;
                self.omega = breakdowns;
                for c in checks.iter().filter(|c| !c.holds) {
                    self.disagree(format!("master identity at n = {}: {} vs {}", c.n, c.lhs, c.rhs));
                }
                self.extra.insert("master_identity".into(), to_value(&checks));
            }
            Command::Northcott => {
                let rec = rec.as_ref().unwrap();
                if d == 1 {
                    let rep = dimension_one_report(&mut an, rec, self.opts.flags)?;
                    if rep.agrees == Some(false) {
                        self.disagree(format!(
                            "j_1 {} vs decomposition {:?}",
                            rep.j1, rep.formula_value
                        ));
                    }
                    self.northcott = to_value(&rep);
                } else {
                    let rep = northcott_report(&mut an, rec, r, self.opts.flags, self.opts.reading)?;
                    if rep.theorem_verdict == Verdict::Violated {
                        self.disagree(format!(
                            "equality {} with reduction number {}",
                            rep.equality, rep.reduction_number
                        ));
                    }
                    if let Some(c) = &rep.classical {
                        if !c.agrees {
                            self.disagree(format!(
                                "e_0 - colength {} vs λ(I/J) {}",
                                c.e0_minus_colength, c.lambda_ij
                            ));
                        }
                    }
                    self.diagnostics.extend(rep.notes.iter().cloned());
                    self.northcott = to_value(&rep);
                }
            }
            Command::Oracle => unreachable!(),
        }
        if self.opts.oracle {
            self.oracle(rec.as_ref())?;
        }
        Ok(())
    }
}

/// Runs `cmd` and assembles the report; errors become diagnostics.
pub fn run_command(cmd: Command, problem: &Problem, opts: &Options) -> Outcome {
    let mut run = Run {
        problem,
        opts,
        exit: EXIT_OK,
        diagnostics: Vec::new(),
        hypotheses: Value::Null,
        j: Vec::new(),
        routes: Map::new(),
        northcott: Value::Null,
        omega: Vec::new(),
        extra: Map::new(),
        passing: false,
    };
    if let Err(e) = run.execute(cmd) {
        run.fail(&e);
        if cmd == Command::Northcott && run.northcott.is_null() {
            run.northcott = json!({"theorem_verdict": "not-applicable"});
        }
    }
    let mut results = Map::new();
    results.insert("j".into(), json!(run.j));
    results.insert("routes".into(), Value::Object(run.routes));
    results.insert("northcott".into(), run.northcott);
    results.insert("omega".into(), Value::Array(run.omega));
    results.extend(run.extra);
    let report = json!({
        "input": {"command": cmd.name(), "problem": problem.print()},
        "seed": opts.seed,
        "char": problem.characteristic,
        "hypotheses": run.hypotheses,
        "results": Value::Object(results),
        "diagnostics": run.diagnostics,
    });
    Outcome {
        report,
        exit: run.exit,
    }
}

/// One table cell; scalar arrays stay inline.
fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace('\n', "; ").trim_end_matches("; ").to_string(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(cell).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (k, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{k}]"), x, rows);
            }
        }
        _ => rows.push((prefix.to_string(), cell(v))),
    }
}

/// Two aligned columns: the flattened key path and its value.
pub fn render_table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

pub fn render_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable report");
    s.push('\n');
    s
}
