//! Command-line front end. Every subcommand writes a line-oriented report
//! and maps its outcome to an exit code: 0 success, 1 property violation,
//! 2 input error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artin::{ArtinAlgebra, ArtinElement};
use crate::cartan::CartanCandidate;
use crate::cone::{Cone, GaugePair, McChi};
use crate::dgla::{check_dgla, Dgla};
use crate::error::{Error, Result};
use crate::io::{parse_combination, strip_comment};
use crate::lie::{extend_scalars, Ext, GradedLie};
use crate::linalg::{Matrix, Vector};
use crate::models::{
    build_dot_square_algebra, check_deldelbar_lemma, parse_model, random_spec, DotSquareSpec, ModelFile, KS_BIDEGREE,
};
use crate::period::PeriodModel;
use crate::report::Report;
use crate::samples::{cone_instances, matrix_cone};
use crate::scalar::{q, Q};

#[derive(Parser, Debug)]
#[command(name = "gendef", version, about = "Checkers for DGLA morphisms, Cartan homotopies and period maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelSource {
    /// Model file (`dot`, `square`, `zigzag`, `poly`, `D` lines).
    pub model: Option<PathBuf>,
    /// Flat torus of the given complex dimension.
    #[arg(long)]
    pub torus: Option<usize>,
    /// Inline dot/square spec, lines separated by `;`.
    #[arg(long)]
    pub dotsquare: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks the DGLA axioms of a structure-constant file.
    CheckDgla { file: PathBuf },
    /// Checks the Cartan identities of a morphism file with `i` lines.
    CheckCartan { file: PathBuf },
    /// Checks that an element lies in MC_χ and in the MC set of the cone.
    ConeMc { chi: PathBuf, elem: PathBuf },
    /// Applies a gauge pair to an MC_χ element.
    Gauge { chi: PathBuf, gauge: PathBuf, elem: PathBuf },
    /// Checks model invariants and the ∂∂̄-lemma.
    LemmaCheck {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Period matrix of a Maurer-Cartan polyvector field.
    Period {
        /// `[model] xi`; the model is omitted with `--torus`.
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        torus: Option<usize>,
        #[arg(long)]
        ring: PathBuf,
        /// Also compare the filtration images for this `m`.
        #[arg(short = 'm')]
        m: Option<i32>,
    },
    /// First-order differential against contraction on cohomology.
    FirstOrder {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Joint kernel of the contraction maps on H^2(Poly).
    Obstruction {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Runs the seeded property suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Report text and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn from_lines(lines: Vec<String>, passed: bool) -> Self {
        let mut stdout = lines.join("\n");
        stdout.push('\n');
        Outcome { code: if passed { 0 } else { 1 }, stdout, stderr: String::new() }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn execute(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok(o) => o,
        Err(Error::Obstruction { order, detail }) => {
            Outcome::from_lines(vec![format!("FAIL obstruction order={order} {detail}")], false)
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::CheckDgla { file } => {
            let data = crate::dgla::parse_dgla_data(&read(file)?)?;
            let r = check_dgla(&data);
            Ok(Outcome::from_lines(r.lines(), r.passed()))
        }
        Command::CheckCartan { file } => {
            let mor = MorphismFile::load(file)?;
            let cand = CartanCandidate::new(mor.source.clone(), mor.target.clone(), mor.images("i")?)?;
            let r = cand.check_cartan();
            Ok(Outcome::from_lines(r.lines(), r.passed()))
        }
        Command::ConeMc { chi, elem } => {
            let mor = MorphismFile::load(chi)?;
            let cone = mor.cone()?;
            let e = ElemFile::load(elem, None)?.mc_chi(&mor)?;
            let over = cone.over(e.x.ring());
            let chk = over.mc_chi_check(&e)?;
            let (cone_mc, _) = over.mc_cone_check(&over.mcchi_to_cone(&e))?;
            let mut r = Report::new();
            if !chk.holds {
                let flat = mor.source.format_ext(&chk.flatness);
                let gauge = mor.target.format_ext(&chk.gauge);
                r.fail("mc-chi", format!("flatness=[{flat}] gauge=[{gauge}]"));
            }
            if cone_mc != chk.holds {
                r.fail("cone-correspondence", format!("cone={cone_mc} mc-chi={}", chk.holds));
            }
            Ok(Outcome::from_lines(r.lines(), r.passed()))
        }
        Command::Gauge { chi, gauge, elem } => {
            let mor = MorphismFile::load(chi)?;
            let cone = mor.cone()?;
            let ef = ElemFile::load(elem, None)?;
            let e = ef.mc_chi(&mor)?;
            let gf = ElemFile::load(gauge, Some(ef.ring.clone()))?;
            let g = GaugePair { l: gf.ext(&mor.source, "l")?, m: gf.ext(&mor.target, "m")? };
            let over = cone.over(&ef.ring);
            let out = over.gauge_act_chi(&g, &e)?;
            let chk = over.mc_chi_check(&out)?;
            let mut lines = vec![ef.ring.header()];
            lines.extend(elem_lines(&mor.source, &out.x, "x"));
            lines.extend(elem_lines(&mor.target, &out.a, "a"));
            let mut r = Report::new();
            if !chk.holds {
                r.fail("mc-chi", "gauge image is not Maurer-Cartan");
            }
            lines.extend(r.lines());
            Ok(Outcome::from_lines(lines, r.passed()))
        }
        Command::LemmaCheck { source } => {
            let forms = load_model(source)?.forms;
            let mut r = forms.check_invariants();
            let lemma = check_deldelbar_lemma(&forms);
            r.merge(lemma.report);
            Ok(Outcome::from_lines(r.lines(), r.passed()))
        }
        Command::Period { inputs, torus, ring, m } => {
            let (source, xi_path) = match (torus, inputs.as_slice()) {
                (Some(n), [xi]) => (ModelSource { torus: Some(*n), ..Default::default() }, xi),
                (None, [model, xi]) => (ModelSource { model: Some(model.clone()), ..Default::default() }, xi),
                _ => return Err(Error::Parse("expected `<model> <xi>` or `--torus n <xi>`".into())),
            };
            let pm = PeriodModel::new(load_model(&source)?)?;
            let ring = ArtinAlgebra::parse_header(first_line(&read(ring)?)?)?;
            let xi = ElemFile::load(xi_path, Some(ring))?.poly_element(pm.poly().poly())?;
            let p = pm.phi(&xi)?;
            let mut lines: Vec<String> = p.to_text().lines().map(str::to_string).collect();
            let mut r = Report::new();
            if let Some(m) = m {
                let chk = pm.period_theorem_check(&xi, *m)?;
                if !chk.holds {
                    r.fail("period-theorem", format!("m={m} image-dim={} deformed-dim={}", chk.image.q_dim(), chk.deformed.q_dim()));
                }
            }
            lines.extend(r.lines());
            Ok(Outcome::from_lines(lines, r.passed()))
        }
        Command::FirstOrder { source } => {
            let pm = PeriodModel::new(load_model(source)?)?;
            let poly = pm.poly().poly();
            let mut lines = Vec::new();
            let mut r = Report::new();
            for (xi, mat) in pm.first_order_differential()? {
                let name = poly.format(&xi);
                lines.extend(matrix_lines(&pm.labels(), &mat).into_iter().map(|l| format!("{name} {l}")));
                if mat != pm.cohomology_contraction(&xi)? {
                    r.fail("first-order", name);
                }
            }
            lines.extend(r.lines());
            Ok(Outcome::from_lines(lines, r.passed()))
        }
        Command::Obstruction { source } => {
            let pm = PeriodModel::new(load_model(source)?)?;
            let poly = pm.poly().poly();
            let ker = pm.obstruction_subspace()?;
            let mut lines = vec![format!("dim {}", ker.len())];
            lines.extend(ker.iter().map(|v| format!("kernel {}", poly.format(v))));
            lines.push("OK".into());
            Ok(Outcome::from_lines(lines, true))
        }
        Command::Selftest { seed } => {
            let lines = selftest(*seed);
            let passed = lines.iter().all(|l| l.starts_with("OK"));
            Ok(Outcome::from_lines(lines, passed))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn first_line(text: &str) -> Result<&str> {
    text.lines()
        .map(strip_comment)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty ring file".into()))
}

fn load_model(src: &ModelSource) -> Result<ModelFile> {
    match (&src.model, src.torus, &src.dotsquare) {
        (Some(p), None, None) => parse_model(&read(p)?),
        (None, Some(n), None) => ModelFile::torus(n),
        (None, None, Some(s)) => parse_model(&s.replace(';', "\n")),
        _ => Err(Error::Parse("give exactly one of <model>, --torus n, --dotsquare spec".into())),
    }
}

fn matrix_lines(labels: &[String], m: &Matrix) -> Vec<String> {
    let mut out = Vec::new();
    for (i, li) in labels.iter().enumerate() {
        for (j, lj) in labels.iter().enumerate() {
            out.push(format!("{li} {lj} {}", crate::scalar::format_q(m.get(i, j))));
        }
    }
    out
}

fn elem_lines(g: &Dgla, x: &Ext<Vector>, key: &str) -> Vec<String> {
    extend_scalars(g, x.ring())
        .coefficients(x)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{key} {} = {c}", g.basis_name(i)))
        .collect()
}

trait FormatExt {
    fn format_ext(&self, x: &Ext<Vector>) -> String;
}

impl FormatExt for Dgla {
    fn format_ext(&self, x: &Ext<Vector>) -> String {
        elem_lines(self, x, "").iter().map(|l| l.trim().to_string()).collect::<Vec<_>>().join("; ")
    }
}

/// `source <file>`, `target <file>`, then `map <name> = <combination>` and
/// `i <name> = <combination>` lines; paths are relative to the file.
#[derive(Clone, Debug)]
pub struct MorphismFile {
    pub source: Dgla,
    pub target: Dgla,
    lines: Vec<(String, String, String)>,
}

impl MorphismFile {
    pub fn load(path: &Path) -> Result<Self> {
        let dir = path.parent().unwrap_or(Path::new("."));
        let text = read(path)?;
        let (mut source, mut target) = (None, None);
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (kw, tail) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match kw {
                "source" => source = Some(Dgla::parse(&read(&dir.join(tail.trim()))?)?),
                "target" => target = Some(Dgla::parse(&read(&dir.join(tail.trim()))?)?),
                "map" | "i" => {
                    let (name, rhs) = tail
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("line {}: expected `name = ...`", no + 1)))?;
                    lines.push((kw.to_string(), name.trim().to_string(), rhs.trim().to_string()));
                }
                _ => return Err(Error::Parse(format!("line {}: unknown directive `{kw}`", no + 1))),
            }
        }
        Ok(MorphismFile {
            source: source.ok_or_else(|| Error::Parse("missing `source`".into()))?,
            target: target.ok_or_else(|| Error::Parse("missing `target`".into()))?,
            lines,
        })
    }

    /// Images of the source basis under the lines with keyword `kw`; unlisted
    /// basis elements map to zero.
    pub fn images(&self, kw: &str) -> Result<Vec<Vector>> {
        let mut out = vec![self.target.zero(); self.source.dim()];
        for (k, name, rhs) in self.lines.iter().filter(|l| l.0 == kw) {
            let a = self
                .source
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("`{k} {name}`: unknown source basis element")))?;
            out[a] = parse_combination(rhs, self.target.dim(), |s| self.target.index_of(s))?;
        }
        Ok(out)
    }

    pub fn cone(&self) -> Result<Cone<Dgla, Dgla>> {
        let chi = Matrix::from_columns(&self.images("map")?, self.target.dim());
        Ok(matrix_cone(self.source.clone(), self.target.clone(), chi))
    }
}

/// An optional `artin` header, then `<key> <name> = <ring element>` lines
/// (for elements of a single algebra the key is omitted).
#[derive(Clone, Debug)]
pub struct ElemFile {
    pub ring: Arc<ArtinAlgebra>,
    entries: Vec<(Option<String>, String, ArtinElement)>,
}

impl ElemFile {
    pub fn load(path: &Path, ring: Option<Arc<ArtinAlgebra>>) -> Result<Self> {
        Self::parse(&read(path)?, ring)
    }

    pub fn parse(text: &str, ring: Option<Arc<ArtinAlgebra>>) -> Result<Self> {
        let mut ring = ring;
        let mut raw = Vec::new();
        for line in text.lines().map(strip_comment).filter(|l| !l.is_empty()) {
            if line.starts_with("artin") {
                let r = ArtinAlgebra::parse_header(line)?;
                if let Some(prev) = &ring {
                    if prev.header() != r.header() {
                        return Err(Error::Parse(format!("ring `{}` differs from `{}`", r.header(), prev.header())));
                    }
                }
                ring = Some(r);
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::Parse(format!("expected `name = ...` in `{line}`")))?;
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            let (key, name) = match toks.as_slice() {
                [name] => (None, name.to_string()),
                [key, name] => (Some(key.to_string()), name.to_string()),
                _ => return Err(Error::Parse(format!("bad left-hand side `{lhs}`"))),
            };
            raw.push((key, name, rhs.trim().to_string()));
        }
        let ring = ring.ok_or_else(|| Error::Parse("no ring: add an `artin` header or pass --ring".into()))?;
        let entries = raw
            .into_iter()
            .map(|(k, n, r)| Ok((k, n, ring.parse_element(&r)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ElemFile { ring, entries })
    }

    /// Element of `g ⊗ A` from the entries with key `key`.
    pub fn ext(&self, g: &Dgla, key: &str) -> Result<Ext<Vector>> {
        self.collect(g, |k| k == Some(key))
    }

    /// Element of `Poly ⊗ A` from key-less entries.
    pub fn poly_element(&self, g: &Dgla) -> Result<Ext<Vector>> {
        self.collect(g, |k| k.is_none())
    }

    fn collect(&self, g: &Dgla, keep: impl Fn(Option<&str>) -> bool) -> Result<Ext<Vector>> {
        let mut coeffs = Vec::new();
        for (_, name, c) in self.entries.iter().filter(|e| keep(e.0.as_deref())) {
            let i = g.index_of(name).ok_or_else(|| Error::Parse(format!("unknown basis element `{name}`")))?;
            coeffs.push((i, c.clone()));
        }
        Ok(extend_scalars(g, &self.ring).from_coefficients(&coeffs))
    }

    pub fn mc_chi(&self, mor: &MorphismFile) -> Result<McChi<Vector, Vector>> {
        Ok(McChi { x: self.ext(&mor.source, "x")?, a: self.ext(&mor.target, "a")? })
    }
}

fn check_line(name: &str, r: &Report) -> String {
    match r.violations.first() {
        None => format!("OK {name}"),
        Some(v) => format!("FAIL {name}:{} {}", v.property, v.witness),
    }
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-2..=2))
}

fn random_artin(rng: &mut ChaCha8Rng, ring: &Arc<ArtinAlgebra>) -> ArtinElement {
    ArtinElement::from_coeffs(ring, (0..ring.dim()).map(|_| small_q(rng)).collect()).expect("sized")
}

/// The seeded property suite; one line per check.
pub fn selftest(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for (name, g) in [("sl2", Dgla::sl2()), ("heisenberg", Dgla::heisenberg()), ("odd-square", Dgla::odd_square()), ("abelian", Dgla::abelian(&[0, 1, 1, 2]))] {
        out.push(check_line(&format!("dgla {name}"), &check_dgla(g.data())));
    }
    {
        let mut data = Dgla::sl2().data().clone();
        let (a, b) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let mut v = data.brackets.get(&(a, b)).map(|s| {
            let mut d = vec![Q::zero(); 3];
            for (k, c) in s {
                d[*k] = c.clone();
            }
            d
        }).unwrap_or_else(|| vec![Q::zero(); 3]);
        v[rng.gen_range(0..3)] += q(1);
        data.set_bracket(a, b, &v);
        let mut r = Report::new();
        if check_dgla(&data).passed() {
            r.fail("mutation-undetected", format!("bracket ({a},{b})"));
        }
        out.push(check_line("dgla sl2-mutation", &r));
    }

    let rings = [
        ArtinAlgebra::truncated("t", 3),
        ArtinAlgebra::new(&["s", "t"], &[vec![2, 0], vec![1, 1], vec![0, 2]]).expect("ring"),
    ];
    for ring in &rings {
        let mut r = Report::new();
        for _ in 0..20 {
            let (x, y, z) = (random_artin(&mut rng, ring), random_artin(&mut rng, ring), random_artin(&mut rng, ring));
            let l = x.try_mul(&y).and_then(|p| p.try_mul(&z)).expect("same ring");
            let rr = y.try_mul(&z).and_then(|p| x.try_mul(&p)).expect("same ring");
            if l != rr {
                r.fail("associativity", format!("({x})({y})({z})"));
            }
            if x.try_mul(&y).expect("ring") != y.try_mul(&x).expect("ring") {
                r.fail("commutativity", format!("({x})({y})"));
            }
        }
        out.push(check_line(&ring.header(), &r));
    }

    for (name, cone) in cone_instances() {
        out.push(check_line(&format!("cone {name}"), &cone.brackets().check_linfty(3)));
    }

    for k in 0..8 {
        let spec = random_spec(rng.gen(), 4, 2);
        let name = format!("model random-{k}");
        let r = match build_dot_square_algebra(&spec) {
            Ok(m) => {
                let mut r = check_deldelbar_lemma(&m).report;
                let betti = m.complex().cohomology().total_dim();
                let dots = spec.cells.iter().filter(|c| matches!(c, crate::models::Cell::Dot(..))).count();
                if betti != dots {
                    r.fail("betti", format!("{betti} != {dots}"));
                }
                r
            }
            Err(e) => {
                let mut r = Report::new();
                r.fail("build", e.to_string());
                r
            }
        };
        out.push(check_line(&name, &r));
    }

    for n in 1..=2 {
        let r = match ModelFile::torus(n) {
            Ok(mf) => mf.poly.cartan_identities_check(),
            Err(e) => {
                let mut r = Report::new();
                r.fail("build", e.to_string());
                r
            }
        };
        out.push(check_line(&format!("cartan torus-{n}"), &r));
    }

    out.push(match period_checks(&mut rng) {
        Ok(r) => check_line("period torus", &r),
        Err(e) => format!("FAIL period torus:error {e}"),
    });
    out.push(match gauge_check(&mut rng) {
        Ok(r) => check_line("period gauge-invariance", &r),
        Err(e) => format!("FAIL period gauge-invariance:error {e}"),
    });
    out
}

fn period_checks(rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut r = Report::new();
    let pm = PeriodModel::torus(2)?;
    let ring = ArtinAlgebra::truncated("t", 3);
    let ks: Vec<usize> = (0..pm.poly().dim()).filter(|&k| pm.poly().op_bidegree(k) == KS_BIDEGREE).collect();
    for trial in 0..3 {
        let mut comps = vec![vec![Q::zero(); pm.poly().dim()]; ring.dim()];
        for &k in &ks {
            for c in comps.iter_mut().skip(1) {
                c[k] = small_q(rng);
            }
        }
        let xi = Ext::from_components(&ring, comps)?;
        for m in 0..=2 {
            if !pm.period_theorem_check(&xi, m)?.holds {
                r.fail("period-theorem", format!("trial {trial} m={m}"));
            }
        }
        if !pm.phi(&xi)?.is_identity_mod_m() {
            r.fail("identity-mod-m", format!("trial {trial}"));
        }
    }
    for (xi, mat) in pm.first_order_differential()? {
        if mat != pm.cohomology_contraction(&xi)? {
            r.fail("first-order", pm.poly().poly().format(&xi));
        }
    }
    Ok(r)
}

fn gauge_check(rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut r = Report::new();
    let pm = PeriodModel::new(ModelFile::from_spec(&DotSquareSpec::unit_with_squares(1))?)?;
    let ring = ArtinAlgebra::truncated("t", 3);
    let chi = pm.build_chi()?;
    let cone = chi.cone();
    let over = cone.over(&ring);
    let end = pm.end();
    let n = pm.forms().dim();
    let mut lift = |f: &crate::linalg::SparseMatrix| {
        let comps = (0..ring.dim())
            .map(|i| if i == 0 { crate::linalg::SparseMatrix::zeros(n, n) } else { f.scale(&small_q(rng)) })
            .collect();
        Ext::from_components(&ring, comps)
    };
    let u = pm.forms().unit();
    let e0 = McChi { x: lift(&crate::linalg::SparseMatrix::zeros(n, n))?, a: lift(&end.elementary(u, u))? };
    let p0 = pm.psi_tilde(&e0)?;
    let lgen: Vec<_> = chi.l.indices_in_degree(0).into_iter().map(|b| chi.l.basis(b)).collect();
    let mgen: Vec<_> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| end.entry_degree(a, b) == -1)
        .map(|(a, b)| end.elementary(a, b))
        .collect();
    for (k, l) in lgen.iter().enumerate() {
        let f = &mgen[k % mgen.len()];
        let g = GaugePair { l: lift(l)?, m: lift(f)? };
        if pm.psi_tilde(&over.gauge_act_chi(&g, &e0)?)? != p0 {
            r.fail("gauge-invariance", format!("l-generator {k}"));
        }
    }
    Ok(r)
}
