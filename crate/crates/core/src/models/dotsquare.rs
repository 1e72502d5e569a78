//! Bicomplexes assembled from dots and squares, the model file format, and a
//! seeded random generator.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgla::{Dgla, DglaData};
use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::io::{parse_combination, parse_pair, strip_comment};
use crate::linalg::SparseMatrix;
use crate::scalar::{q, Q};

use super::torus::build_torus_model;
use super::{BigradedModel, PolyModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    /// One class in bidegree `(p,q)`.
    Dot(i32, i32),
    /// `c, ∂c, ∂̄c, ∂∂̄c` anchored at the bidegree of `c`.
    Square(i32, i32),
    /// `x, ∂x, ∂̄x` with `∂∂̄x = 0`; violates the `∂∂̄`-lemma.
    Zigzag(i32, i32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DotSquareSpec {
    pub cells: Vec<Cell>,
}

impl DotSquareSpec {
    pub fn new(cells: Vec<Cell>) -> Self {
        DotSquareSpec { cells }
    }

    /// The unit dot plus `squares` squares, all anchored at `(0,0)`.
    pub fn unit_with_squares(squares: usize) -> Self {
        let mut cells = vec![Cell::Dot(0, 0)];
        cells.extend(std::iter::repeat_n(Cell::Square(0, 0), squares));
        DotSquareSpec { cells }
    }

    /// Largest `p` and `q` reached by any cell.
    pub fn extent(&self) -> (i32, i32) {
        self.cells.iter().fold((0, 0), |(mp, mq), c| {
            let (p, qq) = match *c {
                Cell::Dot(p, qq) => (p, qq),
                Cell::Square(p, qq) | Cell::Zigzag(p, qq) => (p + 1, qq + 1),
            };
            (mp.max(p), mq.max(qq))
        })
    }

    pub fn to_text(&self) -> String {
        self.cells
            .iter()
            .map(|c| match c {
                Cell::Dot(p, qq) => format!("dot ({p},{qq})\n"),
                Cell::Square(p, qq) => format!("square ({p},{qq})\n"),
                Cell::Zigzag(p, qq) => format!("zigzag ({p},{qq})\n"),
            })
            .collect()
    }
}

/// Builds the model; the first dot at `(0,0)` is the unit and every product
/// of two non-unit cells vanishes.
pub fn build_dot_square_algebra(spec: &DotSquareSpec) -> Result<BigradedModel> {
    let unit_cell = spec
        .cells
        .iter()
        .position(|c| *c == Cell::Dot(0, 0))
        .ok_or_else(|| Error::Precondition("a dot at (0,0) is required as the unit".into()))?;
    for c in &spec.cells {
        let (Cell::Dot(p, qq) | Cell::Square(p, qq) | Cell::Zigzag(p, qq)) = *c;
        if p < 0 || qq < 0 {
            return Err(Error::Invalid(format!("negative bidegree ({p},{qq})")));
        }
    }
    let mut names: Vec<(String, (i32, i32))> = Vec::new();
    let mut del = Vec::new();
    let mut delbar = Vec::new();
    let mut unit = 0;
    let (mut dots, mut squares, mut zigzags) = (0, 0, 0);
    for (k, c) in spec.cells.iter().enumerate() {
        let base = names.len();
        match *c {
            Cell::Dot(p, qq) => {
                if k == unit_cell {
                    unit = base;
                    names.push(("1".into(), (0, 0)));
                } else {
                    dots += 1;
                    names.push((format!("dot{dots}"), (p, qq)));
                }
            }
            Cell::Square(p, qq) => {
                squares += 1;
                for (suffix, b) in [("c", (p, qq)), ("dc", (p + 1, qq)), ("dbc", (p, qq + 1)), ("ddbc", (p + 1, qq + 1))] {
                    names.push((format!("sq{squares}.{suffix}"), b));
                }
                del.push((base + 1, base, q(1)));
                del.push((base + 3, base + 2, q(1)));
                delbar.push((base + 2, base, q(1)));
                delbar.push((base + 3, base + 1, q(-1)));
            }
            Cell::Zigzag(p, qq) => {
                zigzags += 1;
                for (suffix, b) in [("x", (p, qq)), ("u", (p + 1, qq)), ("w", (p, qq + 1))] {
                    names.push((format!("zz{zigzags}.{suffix}"), b));
                }
                del.push((base + 1, base, q(1)));
                delbar.push((base + 2, base, q(1)));
            }
        }
    }
    let n = names.len();
    let space = GradedSpace::from_bidegrees(names)?;
    let mut products = BTreeMap::new();
    for j in 0..n {
        products.insert((unit, j), vec![(j, q(1))]);
        products.insert((j, unit), vec![(j, q(1))]);
    }
    BigradedModel::new(
        space,
        SparseMatrix::from_triplets(n, n, del),
        SparseMatrix::from_triplets(n, n, delbar),
        products,
        unit,
    )
}

/// Unit dot plus up to `max_cells` dots and squares with every bidegree in
/// `[0, bound]²`; deterministic in `seed`.
pub fn random_spec(seed: u64, max_cells: usize, bound: i32) -> DotSquareSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells = vec![Cell::Dot(0, 0)];
    let count = rng.gen_range(0..=max_cells);
    for _ in 0..count {
        if bound > 0 && rng.gen_bool(0.5) {
            cells.push(Cell::Square(rng.gen_range(0..bound), rng.gen_range(0..bound)));
        } else {
            cells.push(Cell::Dot(rng.gen_range(0..=bound), rng.gen_range(0..=bound)));
        }
    }
    DotSquareSpec { cells }
}

/// A parsed model file: forms plus polyvector fields.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub spec: Option<DotSquareSpec>,
    pub forms: Arc<BigradedModel>,
    pub poly: PolyModel,
}

impl ModelFile {
    pub fn from_file(path: &Path) -> Result<Self> {
        parse_model(&std::fs::read_to_string(path)?)
    }

    /// Forms of a dot/square spec with an empty `Poly`.
    pub fn from_spec(spec: &DotSquareSpec) -> Result<Self> {
        parse_model(&spec.to_text())
    }

    pub fn torus(n: usize) -> Result<Self> {
        let (forms, poly) = build_torus_model(n)?;
        Ok(ModelFile { spec: None, forms, poly })
    }
}

fn err(no: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {}: {msg}", no + 1))
}

/// Parses a model file. Lines:
///
/// ```text
/// dot (p,q) | square (p,q) | zigzag (p,q) | torus n
/// poly <name> = <c>*<target><-<source> + ...
/// D <name> = <combination of poly names>
/// require l-injective
/// ```
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut cells = Vec::new();
    let mut torus = None;
    let mut polys: Vec<(usize, String, String)> = Vec::new();
    let mut dlines: Vec<(usize, String, String)> = Vec::new();
    let mut require = false;
    for (no, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let cut = line.find(|c: char| c.is_whitespace() || c == '(').unwrap_or(line.len());
        let (kw, tail) = line.split_at(cut);
        let tail = tail.trim();
        match kw {
            "dot" => {
                let (p, qq) = parse_pair(tail)?;
                cells.push(Cell::Dot(p, qq));
            }
            "square" => {
                let (p, qq) = parse_pair(tail)?;
                cells.push(Cell::Square(p, qq));
            }
            "zigzag" => {
                let (p, qq) = parse_pair(tail)?;
                cells.push(Cell::Zigzag(p, qq));
            }
            "torus" => torus = Some(tail.parse::<usize>().map_err(|_| err(no, "bad torus dimension"))?),
            "poly" | "D" => {
                let (name, rhs) = tail.split_once('=').ok_or_else(|| err(no, "expected `name = ...`"))?;
                let entry = (no, name.trim().to_string(), rhs.trim().to_string());
                if kw == "poly" {
                    polys.push(entry);
                } else {
                    dlines.push(entry);
                }
            }
            "require" if tail == "l-injective" => require = true,
            _ => return Err(err(no, format!("unknown directive `{kw}`"))),
        }
    }
    if let Some(n) = torus {
        if !cells.is_empty() || !polys.is_empty() || !dlines.is_empty() {
            return Err(Error::Parse("a torus model takes no other directives".into()));
        }
        return ModelFile::torus(n);
    }
    let spec = DotSquareSpec { cells };
    let forms = Arc::new(build_dot_square_algebra(&spec)?);
    let n = forms.dim();
    let sp = forms.space();
    let mut contractions = Vec::new();
    let mut op_bidegrees = Vec::new();
    let mut pnames = Vec::new();
    for (no, name, rhs) in &polys {
        let arrow = rhs.replace("<-", "\u{2190}");
        let lookup = |tok: &str| {
            let (dst, src) = tok.split_once('\u{2190}')?;
            Some(sp.index_of(dst.trim())? * n + sp.index_of(src.trim())?)
        };
        let v = parse_combination(&arrow, n * n, lookup).map_err(|e| err(*no, e))?;
        let op = SparseMatrix::from_triplets(
            n,
            n,
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k / n, k % n, c.clone())),
        );
        let mut bideg = None;
        for (i, j, _) in op.entries() {
            let (pi, qi) = forms.bidegree(i);
            let (pj, qj) = forms.bidegree(j);
            let b = (pi - pj, qi - qj);
            if bideg.replace(b).is_some_and(|old| old != b) {
                return Err(err(*no, format!("contraction of {name} is not bihomogeneous")));
            }
        }
        let bideg = bideg.ok_or_else(|| err(*no, format!("contraction of {name} is zero")))?;
        contractions.push(op);
        op_bidegrees.push(bideg);
        pnames.push((name.clone(), bideg.0 + bideg.1 + 1));
    }
    let pspace = GradedSpace::from_degrees(pnames)?;
    let mut data = DglaData::new(pspace.clone());
    for (no, name, rhs) in &dlines {
        let a = pspace.index_of(name).ok_or_else(|| err(*no, format!("unknown polyvector `{name}`")))?;
        let v: Vec<Q> = parse_combination(rhs, pspace.dim(), |s| pspace.index_of(s)).map_err(|e| err(*no, e))?;
        data.set_d(a, &v);
    }
    let poly = PolyModel::new(forms.clone(), Dgla::new(data)?, op_bidegrees, contractions, None, require)?;
    Ok(ModelFile { spec: Some(spec), forms, poly })
}

/// Helper for callers that only need the forms of a spec file.
pub fn load_forms(path: &Path) -> Result<Arc<BigradedModel>> {
    Ok(ModelFile::from_file(path)?.forms)
}
