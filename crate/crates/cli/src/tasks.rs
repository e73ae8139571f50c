//! Subcommands as data: the same task structs are parsed from the command
//! line and from batch manifests, and run through one executor.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cubicsym::corpus::{example, ids};
use cubicsym::diffrank::{eigen_partition_witness, explicit_partition, rank_d, support_partition, Certificate};
use cubicsym::forms::{fixes, form_from_text, form_to_text, group_from_text, group_to_text, hat, matrix_from_text, semi_invariance_factor};
use cubicsym::groups::{modular_order, DEFAULT_CAP};
use cubicsym::invariants::{covering_lift, invariant_forms, is_symplectic};
use cubicsym::reps::{enumerate_diagonal_reps, for_each_verdict, AbelianSpec, Status};
use cubicsym::smooth::{is_smooth, Smoothness, DEFAULT_BUDGET};
use cubicsym::verify::{verify_example, Options};
use cubicsym::{CycMatrix, Error, Form};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Human-readable lines, a JSON result whose `value` is the headline answer,
/// and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub result: Value,
    pub code: i32,
}

impl Outcome {
    fn new(lines: Vec<String>, result: Value) -> Outcome {
        Outcome { lines, result, code: EXIT_OK }
    }
    fn code(mut self, code: i32) -> Outcome {
        self.code = code;
        self
    }
}

#[derive(Debug)]
pub enum TaskError {
    Input(String),
    Compute(Error),
}

impl std::fmt::Display for TaskError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TaskError::Input(s) => f.write_str(s),
            TaskError::Compute(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Io(_) | Error::Dimension(_) | Error::ConductorMismatch(..) => TaskError::Input(e.to_string()),
            e => TaskError::Compute(e),
        }
    }
}

type TaskResult = Result<Outcome, TaskError>;

fn read(path: &Path) -> Result<String, TaskError> {
    fs::read_to_string(path).map_err(|e| TaskError::Input(format!("{}: {e}", path.display())))
}

fn load_form(path: &Path) -> Result<Form, TaskError> {
    form_from_text(&read(path)?).map_err(|e| TaskError::Input(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> Result<Vec<CycMatrix>, TaskError> {
    Ok(group_from_text(&read(path)?).map_err(|e| TaskError::Input(format!("{}: {e}", path.display())))?.1)
}

fn load_matrix(path: &Path) -> Result<CycMatrix, TaskError> {
    matrix_from_text(&read(path)?).map_err(|e| TaskError::Input(format!("{}: {e}", path.display())))
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SmoothArgs {
    #[arg(long)]
    pub form: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RankArgs {
    #[arg(long)]
    pub form: PathBuf,
    /// Derivative order i.
    #[arg(long)]
    pub order: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[arg(long)]
    pub form: PathBuf,
    /// Generators scanned for an eigenvalue witness.
    #[arg(long)]
    #[serde(default)]
    pub group: Option<PathBuf>,
    /// Change of coordinates whose image of F is split syntactically.
    #[arg(long)]
    #[serde(default)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OrderArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    #[serde(default = "default_cap")]
    pub cap: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub form: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct InvariantsArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SymplecticArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub form: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RepsArgs {
    /// Cyclic factor orders, e.g. 9,5.
    #[arg(long, value_delimiter = ',', required = true)]
    pub abelian: Vec<u32>,
    #[arg(long)]
    pub vars: usize,
    #[arg(long)]
    pub degree: usize,
    /// Decide smoothness for every class.
    #[arg(long)]
    #[serde(default)]
    pub filter: bool,
    /// Directory for accepted witness forms.
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 200_000)]
    #[serde(default = "default_rep_budget")]
    pub budget: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LiftArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub degree: usize,
    /// Also check that the lifted generators fix F + x_{m+1}^d.
    #[arg(long)]
    #[serde(default)]
    pub form: Option<PathBuf>,
    /// Write the lifted group here instead of printing it.
    #[arg(long)]
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    #[serde(default)]
    pub action: ExampleAction,
    /// Record id such as X20 or X15', or `all`.
    #[arg(default_value = "all")]
    #[serde(default = "all_ids")]
    pub id: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    #[serde(default = "default_cap")]
    pub cap: usize,
    /// Skip the smoothness check.
    #[arg(long)]
    #[serde(default)]
    pub no_smooth: bool,
    /// Target directory for `export`.
    #[arg(long)]
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleAction {
    #[default]
    Verify,
    List,
    /// Write the form and generator files of a record.
    Export,
}

fn all_ids() -> String {
    "all".into()
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_cap() -> usize {
    DEFAULT_CAP
}
fn default_rep_budget() -> usize {
    200_000
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", content = "inputs", rename_all = "kebab-case")]
pub enum Task {
    /// Decide smoothness of a form.
    Smooth(SmoothArgs),
    /// Rank of the order-i derivative map.
    Rank(RankArgs),
    /// Certified partition of a form.
    Partition(PartitionArgs),
    /// Projective order of a finite matrix group.
    Order(OrderArgs),
    /// Whether each generator fixes the form.
    CheckInvariance(InvarianceArgs),
    /// Basis of invariant forms of a degree.
    Invariants(InvariantsArgs),
    /// det(A) = λ² test for one automorphism.
    Symplectic(SymplecticArgs),
    /// Diagonal representations of an abelian group up to d-equivalence.
    Reps(RepsArgs),
    /// Covering group diag(A, 1), diag(ξ_d I, 1).
    Lift(LiftArgs),
    /// Replay a shipped example record.
    Example(ExampleArgs),
}

impl Task {
    /// Resolve relative paths against a base directory.
    pub fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let fix_opt = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        match self {
            Task::Smooth(a) => fix(&mut a.form),
            Task::Rank(a) => fix(&mut a.form),
            Task::Partition(a) => {
                fix(&mut a.form);
                fix_opt(&mut a.group);
                fix_opt(&mut a.matrix);
            }
            Task::Order(a) => fix(&mut a.group),
            Task::CheckInvariance(a) => {
                fix(&mut a.group);
                fix(&mut a.form);
            }
            Task::Invariants(a) => fix(&mut a.group),
            Task::Symplectic(a) => {
                fix(&mut a.matrix);
                fix(&mut a.form);
            }
            Task::Reps(a) => fix_opt(&mut a.out),
            Task::Lift(a) => {
                fix(&mut a.group);
                fix_opt(&mut a.form);
                fix_opt(&mut a.output);
            }
            Task::Example(a) => fix_opt(&mut a.dir),
        }
    }

    pub fn execute(&self) -> TaskResult {
        match self {
            Task::Smooth(a) => smooth(a),
            Task::Rank(a) => {
                let r = rank_d(&load_form(&a.form)?, a.order)?;
                Ok(Outcome::new(vec![r.to_string()], json!({ "value": r })))
            }
            Task::Partition(a) => partition(a),
            Task::Order(a) => order(a),
            Task::CheckInvariance(a) => check_invariance(a),
            Task::Invariants(a) => invariants(a),
            Task::Symplectic(a) => symplectic(a),
            Task::Reps(a) => reps(a),
            Task::Lift(a) => lift(a),
            Task::Example(a) => example_verify(a),
        }
    }
}

fn show_form(f: &Form) -> String {
    let terms: Vec<String> = f
        .terms()
        .iter()
        .map(|(mo, c)| if c.is_one() { mo.pretty() } else { format!("({c})*{}", mo.pretty()) })
        .collect();
    terms.join(" + ")
}

fn smooth(a: &SmoothArgs) -> TaskResult {
    let f = load_form(&a.form)?;
    Ok(match is_smooth(&f, a.budget)? {
        Smoothness::Smooth => Outcome::new(vec!["SMOOTH".into()], json!({ "value": "SMOOTH" })),
        Smoothness::Singular(w) => {
            Outcome::new(vec![format!("SINGULAR {w}")], json!({ "value": "SINGULAR", "witness": w.to_string() }))
        }
        Smoothness::Exhausted => {
            Outcome::new(vec!["EXHAUSTED".into()], json!({ "value": "EXHAUSTED" })).code(EXIT_EXHAUSTED)
        }
    })
}

fn partition(a: &PartitionArgs) -> TaskResult {
    let f = load_form(&a.form)?;
    let m = f.nvars();
    let mut lines = Vec::new();
    let report = match &a.matrix {
        Some(p) => explicit_partition(&load_matrix(p)?, &f)?,
        None => support_partition(&f.support(), m),
    };
    lines.push(report.to_string());
    let mut tags = Vec::new();
    if let Some(g) = &a.group {
        for (k, gen) in load_group(g)?.iter().enumerate() {
            if let Some((s, t)) = eigen_partition_witness(gen)? {
                lines.push(format!("generator {} certifies a ({s},{t}) partition ({:?})", k + 1, Certificate::EigenvalueWitness));
                tags.push(json!({ "generator": k + 1, "sizes": [s, t] }));
            }
        }
    }
    let sizes: Vec<usize> = report.blocks.iter().map(|b| b.len()).collect();
    Ok(Outcome::new(
        lines,
        json!({
            "value": sizes,
            "blocks": report.blocks.iter().map(|b| b.iter().map(|v| v + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "residual": report.residual.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "certified_by": format!("{:?}", report.certified_by),
            "eigen_witnesses": tags,
        }),
    ))
}

fn order(a: &OrderArgs) -> TaskResult {
    let gens = load_group(&a.group)?;
    match modular_order(&gens, a.cap) {
        Ok(mo) => {
            let proj = mo.projective();
            Ok(Outcome::new(
                vec![format!("{proj} (linear {}, scalars {}, mod {})", mo.order, mo.scalars, mo.prime)],
                json!({ "value": proj, "linear": mo.order, "scalars": mo.scalars }),
            ))
        }
        Err(Error::CapExceeded(n)) => Ok(Outcome::new(
            vec![format!("EXHAUSTED (more than {n} elements)")],
            json!({ "value": "EXHAUSTED", "cap": n }),
        )
        .code(EXIT_EXHAUSTED)),
        Err(e) => Err(e.into()),
    }
}

fn check_invariance(a: &InvarianceArgs) -> TaskResult {
    let gens = load_group(&a.group)?;
    let f = load_form(&a.form)?;
    let mut lines = Vec::new();
    let mut all = true;
    let mut each = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let line = match semi_invariance_factor(g, &f)? {
            Some(l) if l.is_one() => "fixes F".to_string(),
            Some(l) => {
                all = false;
                format!("scales F by {l}")
            }
            None => {
                all = false;
                "moves F".to_string()
            }
        };
        each.push(line.clone());
        lines.push(format!("generator {}: {line}", k + 1));
    }
    lines.push(if all { "INVARIANT".into() } else { "NOT INVARIANT".into() });
    Ok(Outcome::new(lines, json!({ "value": all, "generators": each })))
}

fn invariants(a: &InvariantsArgs) -> TaskResult {
    let gens = load_group(&a.group)?;
    let sp = invariant_forms(&gens, a.degree)?;
    let mut lines = vec![format!("dimension {}", sp.dim())];
    lines.extend(sp.basis.iter().map(|b| form_to_text(b).trim_end().to_string()));
    Ok(Outcome::new(lines, json!({ "value": sp.dim(), "basis": sp.basis.iter().map(form_to_text).collect::<Vec<_>>() })))
}

fn symplectic(a: &SymplecticArgs) -> TaskResult {
    let s = is_symplectic(&load_matrix(&a.matrix)?, &load_form(&a.form)?)?;
    let verdict = if s.symplectic { "YES" } else { "NO" };
    Ok(Outcome::new(
        vec![format!("{verdict} (λ = {}, det = {})", s.lambda, s.det)],
        json!({ "value": s.symplectic, "lambda": s.lambda.to_string(), "det": s.det.to_string() }),
    ))
}

fn reps(a: &RepsArgs) -> TaskResult {
    let spec = AbelianSpec::from_orders(&a.abelian).map_err(|e| TaskError::Input(e.to_string()))?;
    if a.vars < 3 && a.filter {
        return Err(TaskError::Input("filtering needs at least 3 variables".into()));
    }
    let mut lines = Vec::new();
    if !a.filter {
        let classes = enumerate_diagonal_reps(&spec, a.vars, a.degree)?;
        lines.extend(classes.iter().map(|c| format!("[{}]\tclass", c.exp_text())));
        lines.push(format!("{} classes of {spec} in {} variables", classes.len(), a.vars));
        return Ok(Outcome::new(lines, json!({ "value": classes.len(), "classes": classes.len() })));
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| TaskError::Input(format!("{}: {e}", dir.display())))?;
    }
    let (mut accepted, mut rejected, mut undecided) = (0usize, 0usize, 0usize);
    let mut io_error = None;
    let classes = for_each_verdict(&spec, a.vars - 2, a.degree, a.budget, |v| {
        let exp = v.class.exp_text();
        match &v.status {
            Status::Accepted(w) => {
                accepted += 1;
                let path = a.out.as_ref().map(|dir| dir.join(format!("witness_{accepted}.form")));
                let shown = match &path {
                    Some(p) => {
                        if let Err(e) = fs::write(p, form_to_text(w)) {
                            io_error = Some(format!("{}: {e}", p.display()));
                        }
                        p.display().to_string()
                    }
                    None => show_form(w),
                };
                lines.push(format!("[{exp}]\tACCEPTED\t{shown}"));
            }
            Status::RejectedNonSmooth(w) => {
                rejected += 1;
                lines.push(format!("[{exp}]\tREJECTED\t{w}"));
            }
            Status::Undecided => {
                undecided += 1;
                lines.push(format!("[{exp}]\tUNDECIDED"));
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(TaskError::Input(e));
    }
    lines.push(format!("{classes} classes of {spec}: {accepted} accepted, {rejected} rejected, {undecided} undecided"));
    let out = Outcome::new(
        lines,
        json!({ "value": accepted, "classes": classes, "rejected": rejected, "undecided": undecided }),
    );
    Ok(if undecided > 0 { out.code(EXIT_EXHAUSTED) } else { out })
}

fn lift(a: &LiftArgs) -> TaskResult {
    let gens = load_group(&a.group)?;
    let m = gens.first().map(|g| g.nrows()).ok_or_else(|| TaskError::Input("empty group".into()))?;
    let lifted = covering_lift(&gens, a.degree);
    let text = group_to_text(&lifted, m + 1);
    let mut lines = Vec::new();
    match &a.output {
        Some(p) => {
            fs::write(p, &text).map_err(|e| TaskError::Input(format!("{}: {e}", p.display())))?;
            lines.push(format!("wrote {} generators to {}", lifted.len(), p.display()));
        }
        None => lines.push(text.trim_end().to_string()),
    }
    let mut result = json!({ "value": lifted.len(), "generators": lifted.len() });
    let mut code = EXIT_OK;
    if let Some(fp) = &a.form {
        let h = hat(&load_form(fp)?)?;
        let mut ok = true;
        for g in &lifted {
            ok &= fixes(g, &h)?;
        }
        lines.push(if ok { "lifted group fixes F + x^d".into() } else { "lifted group does NOT fix F + x^d".into() });
        result = json!({ "value": ok, "generators": lifted.len() });
        if !ok {
            code = EXIT_MISMATCH;
        }
    }
    Ok(Outcome::new(lines, result).code(code))
}

fn example_verify(a: &ExampleArgs) -> TaskResult {
    if a.action == ExampleAction::List {
        let all = ids();
        return Ok(Outcome::new(all.clone(), json!({ "value": all.len(), "ids": all })));
    }
    if a.action == ExampleAction::Export {
        return example_export(a);
    }
    let which: Vec<String> = if a.id == "all" { ids() } else { vec![a.id.clone()] };
    let opts = Options { cap: a.cap, smoothness: !a.no_smooth, ..Options::default() };
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for id in which {
        let ex = example(&id).map_err(|e| TaskError::Input(e.to_string()))?;
        let r = verify_example(&ex, &opts)?;
        lines.extend(r.to_string().lines().map(String::from));
        if !r.passed() {
            code = EXIT_MISMATCH;
        } else if r.exhausted() && code == EXIT_OK {
            code = EXIT_EXHAUSTED;
        }
        reports.push(json!({
            "id": r.id,
            "passed": r.passed(),
            "order": r.order,
            "symplectic_order": r.symplectic_order,
            "checks": r.checks.iter().map(|c| json!({ "name": c.name, "status": c.status.to_string(), "detail": c.detail })).collect::<Vec<_>>(),
        }));
    }
    let value = if code == EXIT_MISMATCH { "FAIL" } else { "PASS" };
    Ok(Outcome { lines, result: json!({ "value": value, "reports": reports }), code })
}

fn example_export(a: &ExampleArgs) -> TaskResult {
    let dir = a.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| TaskError::Input(format!("{}: {e}", dir.display())))?;
    let which: Vec<String> = if a.id == "all" { ids() } else { vec![a.id.clone()] };
    let mut lines = Vec::new();
    for id in &which {
        let ex = example(id).map_err(|e| TaskError::Input(e.to_string()))?;
        let stem = id.replace('\'', "p");
        let (fp, gp) = (dir.join(format!("{stem}.form")), dir.join(format!("{stem}.group")));
        let write = |p: &Path, text: String| fs::write(p, text).map_err(|e| TaskError::Input(format!("{}: {e}", p.display())));
        write(&fp, form_to_text(&ex.form))?;
        write(&gp, group_to_text(&ex.gens, ex.form.nvars()))?;
        lines.push(format!("{id}: {} {}", fp.display(), gp.display()));
    }
    Ok(Outcome::new(lines, json!({ "value": which.len() })))
}
