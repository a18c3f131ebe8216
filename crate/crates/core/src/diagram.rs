//! Catalog of real simple Lie algebras: Satake diagrams, structural flags,
//! and the surjectivity classification of the commutator map.
//!
//! Node labels are 1-based throughout (matching the standard tables); colors
//! are stored in a 0-indexed vector with `colors[i]` describing node `i+1`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::LazyLock;
use thiserror::Error;

/// Embedded catalog data: exceptional forms and the classical family index.
const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown algebra '{name}'; nearest catalog names: {}", suggestions.join(", "))]
    UnknownName { name: String, suggestions: Vec<String> },
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("no matrix realization available for {0}")]
    UnsupportedRealization(String),
    #[error("catalog data is malformed: {0}")]
    MalformedData(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeColor {
    White,
    Black,
}

/// Underlying Dynkin graph. Edges are undirected bonds `(i, j, multiplicity)`
/// with multiplicity 1, 2 or 3; bond direction is determined by the series
/// letter in `type_label`, so it is not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynkinDiagram {
    pub type_label: String,
    pub nodes: usize,
    pub edges: Vec<(usize, usize, u8)>,
}

/// Satake diagram: Dynkin graph plus node colors and the involution arrows
/// (unordered pairs of white nodes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatakeDiagram {
    pub base: DynkinDiagram,
    pub colors: Vec<NodeColor>,
    pub arrows: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RealFormFlags {
    pub split: bool,
    pub compact: bool,
    /// A complex simple algebra regarded as a real algebra.
    pub complex: bool,
    pub inner_type: bool,
    pub hermitian: bool,
}

/// Identity of a real form: family plus parameters, already normalized
/// (`p <= q`, compact forms have first parameter 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FormId {
    SlR { n: u32 },
    SlC { n: u32 },
    SlH { m: u32 },
    Su { p: u32, q: u32 },
    So { p: u32, q: u32 },
    SoC { n: u32 },
    /// Quaternionic unitary sp(p,q).
    SpQ { p: u32, q: u32 },
    /// Split symplectic sp(n,R), n even.
    SpR { n: u32 },
    SpC { n: u32 },
    /// Quaternionic u*(n,H), also written so*(2n).
    UStarH { n: u32 },
    Exceptional { name: String },
}

/// One catalog entry, fully instantiated.
#[derive(Debug, Clone, Serialize)]
pub struct RealFormRecord {
    pub name: String,
    pub id: FormId,
    pub diagram: SatakeDiagram,
    pub flags: RealFormFlags,
    /// Rank of the complexification (dimension of a Cartan subalgebra).
    pub rank: usize,
    /// Real dimension.
    pub dim: usize,
    /// Dimension of a maximal abelian subspace of p (the real rank).
    pub restricted_rank: usize,
    /// Known isomorphic catalog names, if any.
    pub aliases: Vec<String>,
    /// Whether `build_algebra` can produce a matrix realization.
    pub realizable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Surjective,
    Open,
}

/// Which argument settles the verdict. `ClassicalList` is retained for
/// report consumers but the precedence chain below never emits it: every
/// algebra on the classical list is already covered by an earlier rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Justification {
    Complex,
    SplitOrCompact,
    MSemisimple,
    InnerNonHermitian,
    ClassicalList,
    OpenCase,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurjectivityReport {
    pub name: String,
    pub verdict: Verdict,
    pub justification: Justification,
    pub arrow_count: usize,
    pub center_dim_m: usize,
    pub restricted_rank: usize,
}

impl fmt::Display for SurjectivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.justification {
            Justification::Complex => "surjective: complex type, split over C",
            Justification::SplitOrCompact => "surjective: split or compact form",
            Justification::MSemisimple => {
                "surjective: centralizer of a maximal flat is semisimple"
            }
            Justification::InnerNonHermitian => "surjective: inner type, non-hermitian",
            Justification::ClassicalList => "surjective: classical list",
            Justification::OpenCase => "open case",
        };
        write!(f, "{}: {}", self.name, label)
    }
}

// ---------------------------------------------------------------------------
// Dynkin shapes
// ---------------------------------------------------------------------------

fn series_edges(series: char, rank: usize, offset: usize) -> Vec<(usize, usize, u8)> {
    let n = |i: usize| i + offset; // 1-based node label with offset
    let mut edges = Vec::new();
    match series {
        'A' => {
            for i in 1..rank {
                edges.push((n(i), n(i + 1), 1));
            }
        }
        'B' | 'C' => {
            for i in 1..rank.saturating_sub(1) {
                edges.push((n(i), n(i + 1), 1));
            }
            if rank >= 2 {
                edges.push((n(rank - 1), n(rank), 2));
            }
        }
        'D' => {
            assert!(rank >= 3, "D series needs rank >= 3");
            for i in 1..rank - 2 {
                edges.push((n(i), n(i + 1), 1));
            }
            edges.push((n(rank - 2), n(rank - 1), 1));
            edges.push((n(rank - 2), n(rank), 1));
        }
        'E' => {
            assert!((6..=8).contains(&rank));
            // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to 4.
            edges.push((n(1), n(3), 1));
            edges.push((n(3), n(4), 1));
            edges.push((n(4), n(5), 1));
            edges.push((n(5), n(6), 1));
            if rank >= 7 {
                edges.push((n(6), n(7), 1));
            }
            if rank >= 8 {
                edges.push((n(7), n(8), 1));
            }
            edges.push((n(2), n(4), 1));
        }
        'F' => {
            assert_eq!(rank, 4);
            edges.push((n(1), n(2), 1));
            edges.push((n(2), n(3), 2));
            edges.push((n(3), n(4), 1));
        }
        'G' => {
            assert_eq!(rank, 2);
            edges.push((n(1), n(2), 3));
        }
        _ => panic!("unknown series {series}"),
    }
    edges
}

fn series_label(series: char, rank: usize) -> String {
    // Rank-1 members of B/C/D collapse onto A1; keep the honest shape name.
    match (series, rank) {
        ('B', 1) | ('C', 1) | ('D', 1) => "A1".to_string(),
        _ => format!("{series}{rank}"),
    }
}

fn dynkin(series: char, rank: usize) -> DynkinDiagram {
    let label = series_label(series, rank);
    let series = label.chars().next().unwrap();
    DynkinDiagram {
        type_label: label,
        nodes: rank,
        edges: series_edges(series, rank, 0),
    }
}

/// Two disjoint copies of a Dynkin diagram, used for complex algebras viewed
/// as real: the Satake involution swaps the copies.
fn doubled_dynkin(series: char, rank: usize) -> DynkinDiagram {
    let label = series_label(series, rank);
    let series_norm = label.chars().next().unwrap();
    let mut edges = series_edges(series_norm, rank, 0);
    edges.extend(series_edges(series_norm, rank, rank));
    DynkinDiagram {
        type_label: format!("{label}+{label}"),
        nodes: 2 * rank,
        edges,
    }
}

impl DynkinDiagram {
    /// Checks the graph against the shape its label declares, component by
    /// component (complex forms carry two components).
    pub fn validate(&self) -> Result<(), CatalogError> {
        let parts: Vec<&str> = self.type_label.split('+').collect();
        let mut expected = Vec::new();
        let mut offset = 0;
        for part in &parts {
            let series = part.chars().next().ok_or_else(|| {
                CatalogError::MalformedData(format!("empty type label component in {}", self.type_label))
            })?;
            let rank: usize = part[1..].parse().map_err(|_| {
                CatalogError::MalformedData(format!("bad type label {}", self.type_label))
            })?;
            expected.extend(series_edges(series, rank, offset));
            offset += rank;
        }
        if offset != self.nodes {
            return Err(CatalogError::MalformedData(format!(
                "label {} declares {} nodes, diagram has {}",
                self.type_label, offset, self.nodes
            )));
        }
        let norm = |mut e: Vec<(usize, usize, u8)>| {
            for t in e.iter_mut() {
                if t.0 > t.1 {
                    std::mem::swap(&mut t.0, &mut t.1);
                }
            }
            e.sort_unstable();
            e
        };
        if norm(expected) != norm(self.edges.clone()) {
            return Err(CatalogError::MalformedData(format!(
                "diagram edges do not match shape {}",
                self.type_label
            )));
        }
        Ok(())
    }
}

impl SatakeDiagram {
    pub fn white_count(&self) -> usize {
        self.colors.iter().filter(|c| **c == NodeColor::White).count()
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        self.base.validate()?;
        if self.colors.len() != self.base.nodes {
            return Err(CatalogError::MalformedData("color count mismatch".into()));
        }
        let mut seen = vec![false; self.base.nodes];
        for &(i, j) in &self.arrows {
            if i == j || i == 0 || j == 0 || i > self.base.nodes || j > self.base.nodes {
                return Err(CatalogError::MalformedData(format!("bad arrow ({i},{j})")));
            }
            for n in [i, j] {
                if self.colors[n - 1] != NodeColor::White {
                    return Err(CatalogError::MalformedData(format!(
                        "arrow endpoint {n} is not white"
                    )));
                }
                if seen[n - 1] {
                    return Err(CatalogError::MalformedData(format!(
                        "node {n} appears in two arrows"
                    )));
                }
                seen[n - 1] = true;
            }
        }
        Ok(())
    }
}

/// Number of two-pointed arrows on the Satake diagram.
pub fn arrow_count(diagram: &SatakeDiagram) -> usize {
    diagram.arrows.len()
}

/// Dimension of the center of m = z_k(a), read off the diagram.
pub fn center_dim_of_m(record: &RealFormRecord) -> usize {
    arrow_count(&record.diagram)
}

/// Dimension of a maximal abelian subspace of p, read off the diagram.
pub fn restricted_rank(record: &RealFormRecord) -> usize {
    record.diagram.white_count() - arrow_count(&record.diagram)
}

/// Verdict and justification for the commutator map, strongest rule first.
pub fn surjectivity_status(record: &RealFormRecord) -> SurjectivityReport {
    let arrows = arrow_count(&record.diagram);
    let justification = if record.flags.complex {
        Justification::Complex
    } else if record.flags.split || record.flags.compact {
        Justification::SplitOrCompact
    } else if arrows == 0 {
        Justification::MSemisimple
    } else if record.flags.inner_type && !record.flags.hermitian {
        Justification::InnerNonHermitian
    } else {
        Justification::OpenCase
    };
    let verdict = if justification == Justification::OpenCase {
        Verdict::Open
    } else {
        Verdict::Surjective
    };
    SurjectivityReport {
        name: record.name.clone(),
        verdict,
        justification,
        arrow_count: arrows,
        center_dim_m: arrows,
        restricted_rank: restricted_rank(record),
    }
}

// ---------------------------------------------------------------------------
// Classical families
// ---------------------------------------------------------------------------

fn all_colors(n: usize, color: NodeColor) -> Vec<NodeColor> {
    vec![color; n]
}

fn colors_with_whites(n: usize, whites: &[usize]) -> Vec<NodeColor> {
    let mut colors = vec![NodeColor::Black; n];
    for &w in whites {
        colors[w - 1] = NodeColor::White;
    }
    colors
}

impl FormId {
    pub fn canonical_name(&self) -> String {
        match self {
            FormId::SlR { n } => format!("sl({n},R)"),
            FormId::SlC { n } => format!("sl({n},C)"),
            FormId::SlH { m } => format!("sl({m},H)"),
            FormId::Su { p: 0, q } => format!("su({q})"),
            FormId::Su { p, q } => format!("su({p},{q})"),
            FormId::So { p: 0, q } => format!("so({q})"),
            FormId::So { p, q } => format!("so({p},{q})"),
            FormId::SoC { n } => format!("so({n},C)"),
            FormId::SpQ { p: 0, q } => format!("sp({q})"),
            FormId::SpQ { p, q } => format!("sp({p},{q})"),
            FormId::SpR { n } => format!("sp({n},R)"),
            FormId::SpC { n } => format!("sp({n},C)"),
            FormId::UStarH { n } => format!("u*({n},H)"),
            FormId::Exceptional { name } => name.clone(),
        }
    }
}

fn invalid(family: &str, reason: impl Into<String>) -> CatalogError {
    CatalogError::InvalidParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

/// Normalizes parameters, rejects non-simple or degenerate combinations and
/// rewrites the handful of parameter values that land in another family.
fn normalize_id(id: FormId) -> Result<FormId, CatalogError> {
    Ok(match id {
        FormId::SlR { n } => {
            if n < 2 {
                return Err(invalid("sl(n,R)", "need n >= 2"));
            }
            FormId::SlR { n }
        }
        FormId::SlC { n } => {
            if n < 2 {
                return Err(invalid("sl(n,C)", "need n >= 2"));
            }
            FormId::SlC { n }
        }
        FormId::SlH { m } => {
            if m < 2 {
                return Err(invalid("sl(m,H)", "need m >= 2 (sl(1,H) is su(2))"));
            }
            FormId::SlH { m }
        }
        FormId::Su { p, q } => {
            let (p, q) = (p.min(q), p.max(q));
            if p + q < 2 {
                return Err(invalid("su(p,q)", "need p + q >= 2"));
            }
            FormId::Su { p, q }
        }
        FormId::So { p, q } => {
            let (p, q) = (p.min(q), p.max(q));
            if p + q < 3 {
                return Err(invalid("so(p,q)", "need p + q >= 3"));
            }
            if (p, q) == (0, 4) || (p, q) == (2, 2) {
                return Err(invalid("so(p,q)", "so(4)-type algebras are not simple"));
            }
            if (p, q) == (1, 3) {
                // Lorentz algebra: complex type.
                FormId::SlC { n: 2 }
            } else {
                FormId::So { p, q }
            }
        }
        FormId::SoC { n } => {
            if n < 3 || n == 4 {
                return Err(invalid("so(n,C)", "need n >= 3, n != 4"));
            }
            FormId::SoC { n }
        }
        FormId::SpQ { p, q } => {
            let (p, q) = (p.min(q), p.max(q));
            if p + q < 1 {
                return Err(invalid("sp(p,q)", "need p + q >= 1"));
            }
            FormId::SpQ { p, q }
        }
        FormId::SpR { n } => {
            if n < 2 || n % 2 != 0 {
                return Err(invalid("sp(n,R)", "need even n >= 2"));
            }
            FormId::SpR { n }
        }
        FormId::SpC { n } => {
            if n < 2 || n % 2 != 0 {
                return Err(invalid("sp(n,C)", "need even n >= 2"));
            }
            FormId::SpC { n }
        }
        FormId::UStarH { n } => {
            if n < 3 {
                return Err(invalid("u*(n,H)", "need n >= 3 (u*(2,H) is not simple)"));
            }
            FormId::UStarH { n }
        }
        FormId::Exceptional { name } => FormId::Exceptional { name },
    })
}

struct FamilyData {
    diagram: SatakeDiagram,
    flags: RealFormFlags,
    rank: usize,
    dim: usize,
    restricted_rank: usize,
}

fn classical_data(id: &FormId) -> Result<FamilyData, CatalogError> {
    let flags_default = RealFormFlags {
        split: false,
        compact: false,
        complex: false,
        inner_type: false,
        hermitian: false,
    };
    Ok(match *id {
        FormId::SlR { n } => {
            let n = n as usize;
            let l = n - 1;
            FamilyData {
                diagram: SatakeDiagram {
                    base: dynkin('A', l),
                    colors: all_colors(l, NodeColor::White),
                    arrows: vec![],
                },
                flags: RealFormFlags {
                    split: true,
                    inner_type: n == 2,
                    hermitian: n == 2,
                    ..flags_default
                },
                rank: l,
                dim: n * n - 1,
                restricted_rank: l,
            }
        }
        FormId::SlH { m } => {
            let m = m as usize;
            let l = 2 * m - 1;
            // Odd nodes are black (compact sp(1) blocks), no arrows.
            let whites: Vec<usize> = (2..l).step_by(2).collect();
            FamilyData {
                diagram: SatakeDiagram {
                    base: dynkin('A', l),
                    colors: colors_with_whites(l, &whites),
                    arrows: vec![],
                },
                flags: flags_default,
                rank: l,
                dim: 4 * m * m - 1,
                restricted_rank: m - 1,
            }
        }
        FormId::Su { p, q } => {
            let (p, q) = (p as usize, q as usize);
            let n = p + q;
            let l = n - 1;
            if p == 0 {
                FamilyData {
                    diagram: SatakeDiagram {
                        base: dynkin('A', l),
                        colors: all_colors(l, NodeColor::Black),
                        arrows: vec![],
                    },
                    flags: RealFormFlags {
                        compact: true,
                        inner_type: true,
                        ..flags_default
                    },
                    rank: l,
                    dim: n * n - 1,
                    restricted_rank: 0,
                }
            } else {
                let mut whites: Vec<usize> = (1..=p).collect();
                whites.extend((n - p..=l).filter(|w| *w > p));
                let arrows: Vec<(usize, usize)> =
                    (1..=p).filter(|i| *i != n - i).map(|i| (i, n - i)).collect();
                FamilyData {
                    diagram: SatakeDiagram {
                        base: dynkin('A', l),
                        colors: colors_with_whites(l, &whites),
                        arrows,
                    },
                    flags: RealFormFlags {
                        split: (p, q) == (1, 1),
                        inner_type: true,
                        hermitian: true,
                        ..flags_default
                    },
                    rank: l,
                    dim: n * n - 1,
                    restricted_rank: p,
                }
            }
        }
        FormId::So { p, q } => {
            let (p, q) = (p as usize, q as usize);
            let m = p + q;
            let l = m / 2;
            let odd = m % 2 == 1;
            let series = if odd { 'B' } else { 'D' };
            let (whites, arrows): (Vec<usize>, Vec<(usize, usize)>) = if p == 0 {
                (vec![], vec![])
            } else if !odd && q - p == 2 {
                // Quasi-split even orthogonal algebra: everything white, the
                // fork pair is exchanged.
                ((1..=l).collect(), vec![(l - 1, l)])
            } else {
                ((1..=p).collect(), vec![])
            };
            FamilyData {
                diagram: SatakeDiagram {
                    base: dynkin(series, l),
                    colors: colors_with_whites(l, &whites),
                    arrows,
                },
                flags: RealFormFlags {
                    split: p >= 1 && q - p <= 1,
                    compact: p == 0,
                    inner_type: p % 2 == 0 || q % 2 == 0,
                    hermitian: p == 2 || q == 2,
                    ..flags_default
                },
                rank: l,
                dim: m * (m - 1) / 2,
                restricted_rank: p,
            }
        }
        FormId::SpQ { p, q } => {
            let (p, q) = (p as usize, q as usize);
            let l = p + q;
            let whites: Vec<usize> = (1..=p).map(|i| 2 * i).collect();
            FamilyData {
                diagram: SatakeDiagram {
                    base: dynkin('C', l),
                    colors: colors_with_whites(l, &whites),
                    arrows: vec![],
                },
                flags: RealFormFlags {
                    compact: p == 0,
                    inner_type: true,
                    ..flags_default
                },
                rank: l,
                dim: l * (2 * l + 1),
                restricted_rank: p,
            }
        }
        FormId::SpR { n } => {
            let r = (n / 2) as usize;
            FamilyData {
                diagram: SatakeDiagram {
                    base: dynkin('C', r),
                    colors: all_colors(r, NodeColor::White),
                    arrows: vec![],
                },
                flags: RealFormFlags {
                    split: true,
                    inner_type: true,
                    hermitian: true,
                    ..flags_default
                },
                rank: r,
                dim: r * (2 * r + 1),
                restricted_rank: r,
            }
        }
        FormId::UStarH { .. } => unreachable!("u*(n,H) is handled by ustar_data"),
        FormId::SlC { n } => {
            let n = n as usize;
            let l0 = n - 1;
            complex_data('A', l0, 2 * (n * n - 1))
        }
        FormId::SoC { n } => {
            let n = n as usize;
            let (series, l0) = if n % 2 == 1 { ('B', n / 2) } else { ('D', n / 2) };
            complex_data(series, l0, n * (n - 1))
        }
        FormId::SpC { n } => {
            let r = (n / 2) as usize;
            complex_data('C', r, r * (2 * r + 1) * 2)
        }
        FormId::Exceptional { .. } => unreachable!("exceptional records come from the table"),
    })
}

fn complex_data(series: char, l0: usize, dim: usize) -> FamilyData {
    let base = doubled_dynkin(series, l0);
    let nodes = base.nodes;
    FamilyData {
        diagram: SatakeDiagram {
            base,
            colors: all_colors(nodes, NodeColor::White),
            arrows: (1..=l0).map(|i| (i, i + l0)).collect(),
        },
        flags: RealFormFlags {
            split: false,
            compact: false,
            complex: true,
            inner_type: false,
            hermitian: false,
        },
        rank: 2 * l0,
        dim,
        restricted_rank: l0,
    }
}

fn ustar_data(n: usize) -> FamilyData {
    // D_n with alternating colors; for odd n the fork pair is white and
    // exchanged by the involution.
    let mut whites: Vec<usize> = (1..=n).filter(|i| i % 2 == 0).collect();
    let mut arrows = Vec::new();
    if n % 2 == 1 {
        whites.push(n);
        arrows.push((n - 1, n));
    }
    FamilyData {
        diagram: SatakeDiagram {
            base: dynkin('D', n),
            colors: colors_with_whites(n, &whites),
            arrows,
        },
        flags: RealFormFlags {
            split: false,
            compact: false,
            complex: false,
            inner_type: true,
            hermitian: true,
        },
        rank: n,
        dim: n * (2 * n - 1),
        restricted_rank: n / 2,
    }
}

// ---------------------------------------------------------------------------
// Catalog data file
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
struct ExceptionalEntry {
    name: String,
    iso: String,
    series: String,
    dim: usize,
    rank: usize,
    restricted_rank: usize,
    black: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    #[serde(default)]
    split: bool,
    #[serde(default)]
    compact: bool,
    #[serde(default)]
    complex: bool,
    #[serde(default)]
    inner: bool,
    #[serde(default)]
    hermitian: bool,
    #[serde(default)]
    aliases: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FamilyInfo {
    pub key: String,
    pub pattern: String,
    pub constraints: String,
    pub realizable: bool,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    version: u32,
    families: Vec<FamilyInfo>,
    exceptional: Vec<ExceptionalEntry>,
    aliases: Vec<Vec<String>>,
}

/// The loaded catalog: family index plus instantiated exceptional records.
pub struct Catalog {
    pub version: u32,
    pub families: Vec<FamilyInfo>,
    exceptional: Vec<RealFormRecord>,
    alias_groups: Vec<Vec<String>>,
}

fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let file: CatalogFile =
        serde_json::from_str(text).map_err(|e| CatalogError::MalformedData(e.to_string()))?;
    let mut exceptional = Vec::new();
    for entry in &file.exceptional {
        let series_char = entry
            .series
            .chars()
            .next()
            .ok_or_else(|| CatalogError::MalformedData("empty series".into()))?
            .to_ascii_uppercase();
        let rank0: usize = entry.series[1..]
            .parse()
            .map_err(|_| CatalogError::MalformedData(format!("bad series {}", entry.series)))?;
        let (base, colors, arrows) = if entry.complex {
            let base = doubled_dynkin(series_char, rank0);
            let nodes = base.nodes;
            let arrows = (1..=rank0).map(|i| (i, i + rank0)).collect();
            (base, all_colors(nodes, NodeColor::White), arrows)
        } else {
            let base = dynkin(series_char, rank0);
            let mut colors = all_colors(rank0, NodeColor::White);
            for &b in &entry.black {
                if b == 0 || b > rank0 {
                    return Err(CatalogError::MalformedData(format!(
                        "{}: black node {} out of range",
                        entry.name, b
                    )));
                }
                colors[b - 1] = NodeColor::Black;
            }
            (base, colors, entry.arrows.clone())
        };
        let record = RealFormRecord {
            name: entry.name.clone(),
            id: FormId::Exceptional { name: entry.name.clone() },
            diagram: SatakeDiagram { base, colors, arrows },
            flags: RealFormFlags {
                split: entry.split,
                compact: entry.compact,
                complex: entry.complex,
                inner_type: entry.inner,
                hermitian: entry.hermitian,
            },
            rank: entry.rank,
            dim: entry.dim,
            restricted_rank: entry.restricted_rank,
            aliases: entry.aliases.clone(),
            realizable: false,
        };
        record.validate()?;
        if record.name != entry.name || entry.iso.is_empty() {
            return Err(CatalogError::MalformedData("bad exceptional entry".into()));
        }
        exceptional.push(record);
    }
    Ok(Catalog {
        version: file.version,
        families: file.families,
        exceptional,
        alias_groups: file.aliases,
    })
}

static CATALOG: LazyLock<Catalog> = LazyLock::new(|| {
    parse_catalog(CATALOG_JSON).expect("embedded catalog data must parse")
});

/// Loads (or returns the already-loaded) catalog. Malformed embedded data
/// aborts at first access.
pub fn load_catalog() -> &'static Catalog {
    &CATALOG
}

impl RealFormRecord {
    pub fn validate(&self) -> Result<(), CatalogError> {
        self.diagram.validate()?;
        let whites = self.diagram.white_count();
        let arrows = self.diagram.arrows.len();
        let bad = |msg: &str| Err(CatalogError::MalformedData(format!("{}: {msg}", self.name)));
        if self.restricted_rank != whites - arrows {
            return bad("restricted rank does not match white count minus arrows");
        }
        if self.flags.split && (whites != self.diagram.base.nodes || arrows != 0) {
            return bad("split form must be all white with no arrows");
        }
        if self.flags.compact && (whites != 0 || arrows != 0) {
            return bad("compact form must be all black");
        }
        if self.flags.hermitian && !self.flags.inner_type {
            return bad("hermitian forms are of inner type");
        }
        if self.flags.complex && (self.flags.inner_type || self.flags.split || self.flags.compact)
        {
            return bad("complex type excludes inner/split/compact");
        }
        Ok(())
    }
}

impl Catalog {
    /// Instantiates the record for a (normalized) form id.
    pub fn record(&self, id: FormId) -> Result<RealFormRecord, CatalogError> {
        let id = normalize_id(id)?;
        if let FormId::Exceptional { name } = &id {
            return self
                .exceptional
                .iter()
                .find(|r| r.name.eq_ignore_ascii_case(name))
                .cloned()
                .ok_or_else(|| CatalogError::UnknownName {
                    name: name.clone(),
                    suggestions: self.suggest(name),
                });
        }
        let data = match &id {
            FormId::UStarH { n } => ustar_data(*n as usize),
            other => classical_data(other)?,
        };
        let name = id.canonical_name();
        let record = RealFormRecord {
            name: name.clone(),
            aliases: self.aliases_of(&name),
            id,
            diagram: data.diagram,
            flags: data.flags,
            rank: data.rank,
            dim: data.dim,
            restricted_rank: data.restricted_rank,
            realizable: true,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn exceptional_records(&self) -> &[RealFormRecord] {
        &self.exceptional
    }

    fn aliases_of(&self, name: &str) -> Vec<String> {
        for group in &self.alias_groups {
            if group.iter().any(|g| g == name) {
                return group.iter().filter(|g| *g != name).cloned().collect();
            }
        }
        vec![]
    }

    pub fn alias_groups(&self) -> &[Vec<String>] {
        &self.alias_groups
    }

    /// Nearest catalog names for error messages.
    pub fn suggest(&self, input: &str) -> Vec<String> {
        let mut candidates: Vec<String> = self
            .families
            .iter()
            .map(|f| f.pattern.clone())
            .chain(self.exceptional.iter().map(|r| r.name.clone()))
            .collect();
        let key = input.to_ascii_lowercase();
        candidates.sort_by_key(|c| levenshtein(&c.to_ascii_lowercase(), &key));
        candidates.truncate(3);
        candidates
    }

    /// A deterministic, bounded slice of the catalog: every valid classical
    /// instance with total parameter size at most `max_size`, plus all
    /// exceptional forms.
    pub fn sample_records(&self, max_size: u32) -> Vec<RealFormRecord> {
        let mut out = Vec::new();
        let push = |id: FormId, out: &mut Vec<RealFormRecord>| {
            if let Ok(rec) = self.record(id) {
                if !out.iter().any(|r: &RealFormRecord| r.name == rec.name) {
                    out.push(rec);
                }
            }
        };
        for n in 2..=max_size {
            push(FormId::SlR { n }, &mut out);
            push(FormId::SlC { n }, &mut out);
            push(FormId::SlH { m: n }, &mut out);
        }
        for total in 2..=max_size {
            for p in 0..=total / 2 {
                let q = total - p;
                push(FormId::Su { p, q }, &mut out);
                push(FormId::So { p, q }, &mut out);
                push(FormId::SpQ { p, q }, &mut out);
            }
        }
        for n in 3..=max_size {
            push(FormId::SoC { n }, &mut out);
            push(FormId::UStarH { n }, &mut out);
        }
        for r in 1..=max_size / 2 {
            push(FormId::SpR { n: 2 * r }, &mut out);
            push(FormId::SpC { n: 2 * r }, &mut out);
        }
        out.extend(self.exceptional.iter().cloned());
        out
    }
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            cur[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

// ---------------------------------------------------------------------------
// Name parsing
// ---------------------------------------------------------------------------

/// Parses a user-facing algebra name such as `su(1,2)`, `sl(2,H)`, `sp(4,R)`,
/// `u*(3,H)`, `so*(8)`, `sl2r`, or `EIII`. Multi-token forms pass the family
/// in `name` and the rest in `params`.
pub fn parse_name(name: &str, params: &[String]) -> Result<FormId, CatalogError> {
    let compact = name.trim().replace(' ', "");
    let unknown = || CatalogError::UnknownName {
        name: if params.is_empty() {
            name.to_string()
        } else {
            format!("{} {}", name, params.join(" "))
        },
        suggestions: load_catalog().suggest(name),
    };

    // A whole-token exceptional name wins before any splitting, so that the
    // compact forms g2, f4, e6 are not read as "g(2)" and so on.
    if params.is_empty() {
        if let Some(canon) = canonical_exceptional(&compact) {
            return normalize_id(FormId::Exceptional { name: canon });
        }
    }

    // Split "fam(a,b)" into family and tokens.
    let (fam, mut tokens): (String, Vec<String>) = if let Some(open) = compact.find('(') {
        if !compact.ends_with(')') {
            return Err(unknown());
        }
        let fam = compact[..open].to_string();
        let inner = &compact[open + 1..compact.len() - 1];
        let toks = inner
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.to_string())
            .collect();
        (fam, toks)
    } else if params.is_empty() {
        // Single token: maybe "sl2r" style.
        let letters: String = compact.chars().take_while(|c| c.is_alphabetic() || *c == '*').collect();
        let rest = &compact[letters.len()..];
        if rest.is_empty() {
            (compact.clone(), vec![])
        } else {
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            let field = &rest[digits.len()..];
            let mut toks = vec![digits];
            if !field.is_empty() {
                toks.push(field.to_string());
            }
            (letters, toks)
        }
    } else {
        (compact.clone(), vec![])
    };
    tokens.extend(params.iter().map(|p| p.trim().to_string()));

    let fam_key = fam.to_ascii_lowercase();
    let ints: Vec<u32> = tokens
        .iter()
        .filter_map(|t| t.parse::<i64>().ok())
        .map(|v| u32::try_from(v).unwrap_or(u32::MAX))
        .collect();
    let exceptional_series = matches!(fam_key.as_str(), "e6" | "e7" | "e8" | "f4" | "g2");
    if ints.contains(&u32::MAX) && !exceptional_series {
        return Err(unknown());
    }
    let field: Option<char> = tokens
        .iter()
        .filter(|t| t.parse::<i64>().is_err())
        .filter_map(|t| {
            let c = t.to_ascii_uppercase().chars().next()?;
            matches!(c, 'R' | 'C' | 'H').then_some(c)
        })
        .next();

    let id = match fam_key.as_str() {
        "sl" => match (ints.as_slice(), field) {
            ([n], Some('R') | None) => FormId::SlR { n: *n },
            ([n], Some('C')) => FormId::SlC { n: *n },
            ([m], Some('H')) => FormId::SlH { m: *m },
            _ => return Err(unknown()),
        },
        "su" => match ints.as_slice() {
            [n] => FormId::Su { p: 0, q: *n },
            [p, q] => FormId::Su { p: *p, q: *q },
            _ => return Err(unknown()),
        },
        "su*" => match ints.as_slice() {
            [n] if n % 2 == 0 => FormId::SlH { m: n / 2 },
            _ => return Err(unknown()),
        },
        "so" => match (ints.as_slice(), field) {
            ([n], Some('C')) => FormId::SoC { n: *n },
            ([n], None) => FormId::So { p: 0, q: *n },
            ([p, q], None) => FormId::So { p: *p, q: *q },
            _ => return Err(unknown()),
        },
        "so*" => match ints.as_slice() {
            [n] if n % 2 == 0 => FormId::UStarH { n: n / 2 },
            _ => return Err(unknown()),
        },
        "sp" => match (ints.as_slice(), field) {
            ([n], Some('R')) => FormId::SpR { n: *n },
            ([n], Some('C')) => FormId::SpC { n: *n },
            ([n], Some('H') | None) => FormId::SpQ { p: 0, q: *n },
            ([p, q], _) => FormId::SpQ { p: *p, q: *q },
            _ => return Err(unknown()),
        },
        "u*" | "ustar" => match ints.as_slice() {
            [n] => FormId::UStarH { n: *n },
            _ => return Err(unknown()),
        },
        "e6" | "e7" | "e8" | "f4" | "g2" => {
            // iso-style names like e6(6), e6(-14), f4(-20), plus bare compact
            // names and e6(C)-style complex forms.
            let label = match (fam_key.as_str(), tokens.first().map(|s| s.to_ascii_uppercase())) {
                (f, None) => f.to_string(),
                (f, Some(t)) if t == "C" => format!("{f}(C)"),
                (f, Some(t)) => {
                    let signed: i64 = t.parse().map_err(|_| unknown())?;
                    iso_label(f, signed).ok_or_else(&unknown)?
                }
            };
            FormId::Exceptional {
                name: canonical_exceptional(&label).ok_or_else(&unknown)?,
            }
        }
        _ => {
            let upper = fam.to_ascii_uppercase();
            FormId::Exceptional {
                name: canonical_exceptional(&upper).ok_or_else(&unknown)?,
            }
        }
    };
    normalize_id(id)
}

fn iso_label(series: &str, signature: i64) -> Option<String> {
    let name = match (series, signature) {
        ("e6", 6) => "EI",
        ("e6", 2) => "EII",
        ("e6", -14) => "EIII",
        ("e6", -26) => "EIV",
        ("e6", -78) => "e6",
        ("e7", 7) => "EV",
        ("e7", -5) => "EVI",
        ("e7", -25) => "EVII",
        ("e7", -133) => "e7",
        ("e8", 8) => "EVIII",
        ("e8", -24) => "EIX",
        ("e8", -248) => "e8",
        ("f4", 4) => "FI",
        ("f4", -20) => "FII",
        ("f4", -52) => "f4",
        ("g2", 2) => "G",
        ("g2", -14) => "g2",
        _ => return None,
    };
    Some(name.to_string())
}

fn canonical_exceptional(name: &str) -> Option<String> {
    let lower = name.to_ascii_lowercase();
    for candidate in [
        "EI", "EII", "EIII", "EIV", "EV", "EVI", "EVII", "EVIII", "EIX", "FI", "FII", "G", "e6",
        "e7", "e8", "f4", "g2", "e6(C)", "e7(C)", "e8(C)", "f4(C)", "g2(C)",
    ] {
        if candidate.to_ascii_lowercase() == lower {
            return Some(candidate.to_string());
        }
    }
    None
}

/// One-call resolution from user input to a catalog record.
pub fn resolve(name: &str, params: &[String]) -> Result<RealFormRecord, CatalogError> {
    let id = parse_name(name, params)?;
    load_catalog().record(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str) -> RealFormRecord {
        resolve(name, &[]).unwrap_or_else(|e| panic!("{name}: {e}"))
    }

    fn report(name: &str) -> SurjectivityReport {
        surjectivity_status(&rec(name))
    }

    #[test]
    fn catalog_loads() {
        let cat = load_catalog();
        assert_eq!(cat.version, 1);
        assert_eq!(cat.exceptional_records().len(), 22);
        for r in cat.exceptional_records() {
            r.validate().unwrap();
        }
    }

    #[test]
    fn malformed_data_is_rejected() {
        assert!(parse_catalog("{ not json").is_err());
        // structurally valid JSON but an impossible diagram
        let bad = r#"{"version":1,"families":[],"aliases":[],
            "exceptional":[{"name":"X","iso":"x","series":"E6","dim":78,"rank":6,
            "restricted_rank":3,"black":[1],"arrows":[[1,6]]}]}"#;
        assert!(parse_catalog(bad).is_err());
    }

    #[test]
    fn dynkin_shapes_validate() {
        for (series, rank) in [('A', 5), ('B', 4), ('C', 3), ('D', 4), ('E', 7), ('F', 4), ('G', 2)]
        {
            dynkin(series, rank).validate().unwrap();
        }
        let mut broken = dynkin('D', 4);
        broken.edges.pop();
        assert!(broken.validate().is_err());
    }

    #[test]
    fn family_arrow_counts() {
        assert_eq!(arrow_count(&rec("su(1,2)").diagram), 1);
        assert_eq!(arrow_count(&rec("su(2,2)").diagram), 1);
        assert_eq!(arrow_count(&rec("su(1,3)").diagram), 1);
        assert_eq!(arrow_count(&rec("su(3,5)").diagram), 3);
        assert_eq!(arrow_count(&rec("su(3,3)").diagram), 2);
        assert_eq!(arrow_count(&rec("so(2,3)").diagram), 0);
        assert_eq!(arrow_count(&rec("so(4,6)").diagram), 1);
        assert_eq!(arrow_count(&rec("so(3,5)").diagram), 1);
        assert_eq!(arrow_count(&rec("sl(2,H)").diagram), 0);
        assert_eq!(arrow_count(&rec("sp(1,2)").diagram), 0);
        assert_eq!(arrow_count(&rec("u*(3,H)").diagram), 1);
        assert_eq!(arrow_count(&rec("u*(4,H)").diagram), 0);
        assert_eq!(arrow_count(&rec("sl(3,C)").diagram), 2);
        assert_eq!(arrow_count(&rec("EII").diagram), 2);
        assert_eq!(arrow_count(&rec("EIII").diagram), 1);
        assert_eq!(arrow_count(&rec("EIV").diagram), 0);
    }

    #[test]
    fn restricted_ranks_match_whites_minus_arrows() {
        let cat = load_catalog();
        for record in cat.sample_records(9) {
            assert_eq!(
                record.restricted_rank,
                record.diagram.white_count() - record.diagram.arrows.len(),
                "{}",
                record.name
            );
        }
    }

    #[test]
    fn verdicts_match_known_lists() {
        use Justification::*;
        assert_eq!(report("sl(2,H)").justification, MSemisimple);
        assert_eq!(report("sl(3,H)").justification, MSemisimple);
        assert_eq!(report("sp(1,1)").justification, MSemisimple);
        assert_eq!(report("sp(2,3)").justification, MSemisimple);
        assert_eq!(report("so(3,7)").justification, MSemisimple);
        assert_eq!(report("u*(4,H)").justification, MSemisimple);
        assert_eq!(report("EIV").justification, MSemisimple);
        assert_eq!(report("EVI").justification, MSemisimple);
        assert_eq!(report("EVII").justification, MSemisimple);
        assert_eq!(report("EIX").justification, MSemisimple);
        assert_eq!(report("FII").justification, MSemisimple);

        assert_eq!(report("sl(3,R)").justification, SplitOrCompact);
        assert_eq!(report("su(1,1)").justification, SplitOrCompact);
        assert_eq!(report("so(3,4)").justification, SplitOrCompact);
        assert_eq!(report("su(4)").justification, SplitOrCompact);
        assert_eq!(report("EI").justification, SplitOrCompact);
        assert_eq!(report("g2").justification, SplitOrCompact);

        assert_eq!(report("so(4,6)").justification, InnerNonHermitian);
        assert_eq!(report("EII").justification, InnerNonHermitian);

        assert_eq!(report("sl(4,C)").justification, Complex);
        assert_eq!(report("so(1,3)").justification, Complex);
        assert_eq!(report("e7(C)").justification, Complex);

        for open in ["su(1,2)", "su(2,2)", "su(2,5)", "so(3,5)", "so(2,4)", "u*(3,H)", "u*(5,H)", "EIII"]
        {
            let r = report(open);
            assert_eq!(r.verdict, Verdict::Open, "{open}");
            assert_eq!(r.justification, OpenCase, "{open}");
        }
    }

    #[test]
    fn verdict_is_open_iff_open_justification() {
        for record in load_catalog().sample_records(8) {
            let r = surjectivity_status(&record);
            assert_eq!(
                r.verdict == Verdict::Open,
                r.justification == Justification::OpenCase,
                "{}",
                record.name
            );
            assert_eq!(r.center_dim_m, r.arrow_count);
        }
    }

    #[test]
    fn alias_groups_produce_identical_reports() {
        let cat = load_catalog();
        assert!(!cat.alias_groups().is_empty());
        for group in cat.alias_groups() {
            let recs: Vec<RealFormRecord> =
                group.iter().map(|name| rec(name)).collect();
            let first = surjectivity_status(&recs[0]);
            for other in &recs[1..] {
                let r = surjectivity_status(other);
                assert_eq!(r.verdict, first.verdict, "{group:?}");
                assert_eq!(r.justification, first.justification, "{group:?}");
                assert_eq!(r.arrow_count, first.arrow_count, "{group:?}");
                assert_eq!(r.center_dim_m, first.center_dim_m, "{group:?}");
                assert_eq!(other.dim, recs[0].dim, "{group:?}");
                assert_eq!(other.rank, recs[0].rank, "{group:?}");
                assert_eq!(other.restricted_rank, recs[0].restricted_rank, "{group:?}");
            }
        }
    }

    #[test]
    fn lorentz_algebra_is_complex_type() {
        let r = rec("so(1,3)");
        assert_eq!(r.name, "sl(2,C)");
        assert!(r.flags.complex);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(resolve("so(2,2)", &[]).is_err());
        assert!(resolve("so(4)", &[]).is_err());
        assert!(resolve("so(2)", &[]).is_err());
        assert!(resolve("sl(1,R)", &[]).is_err());
        assert!(resolve("sl(1,H)", &[]).is_err());
        assert!(resolve("u*(2,H)", &[]).is_err());
        assert!(resolve("sp(3,R)", &[]).is_err());
        assert!(resolve("so(4,C)", &[]).is_err());
    }

    #[test]
    fn unknown_names_come_with_suggestions() {
        match resolve("zu(1,2)", &[]) {
            Err(CatalogError::UnknownName { suggestions, .. }) => {
                assert!(!suggestions.is_empty());
            }
            other => panic!("expected UnknownName, got {other:?}"),
        }
    }

    #[test]
    fn name_forms_parse() {
        assert_eq!(parse_name("sl2r", &[]).unwrap(), FormId::SlR { n: 2 });
        assert_eq!(parse_name("sl12r", &[]).unwrap(), FormId::SlR { n: 12 });
        assert_eq!(
            parse_name("su", &["1".into(), "2".into()]).unwrap(),
            FormId::Su { p: 1, q: 2 }
        );
        assert_eq!(
            parse_name("sl", &["2".into(), "H".into()]).unwrap(),
            FormId::SlH { m: 2 }
        );
        assert_eq!(parse_name("so*(8)", &[]).unwrap(), FormId::UStarH { n: 4 });
        assert_eq!(parse_name("su*(4)", &[]).unwrap(), FormId::SlH { m: 2 });
        assert_eq!(parse_name("sp(4,R)", &[]).unwrap(), FormId::SpR { n: 4 });
        assert_eq!(parse_name("sp(2)", &[]).unwrap(), FormId::SpQ { p: 0, q: 2 });
        assert_eq!(
            parse_name("e6(-14)", &[]).unwrap(),
            FormId::Exceptional { name: "EIII".into() }
        );
        assert_eq!(
            parse_name("eiii", &[]).unwrap(),
            FormId::Exceptional { name: "EIII".into() }
        );
        // normalization
        assert_eq!(parse_name("su(2,1)", &[]).unwrap(), FormId::Su { p: 1, q: 2 });
        assert_eq!(parse_name("so(3,1)", &[]).unwrap(), FormId::SlC { n: 2 });
    }

    #[test]
    fn split_forms_are_all_white() {
        for name in ["sl(5,R)", "so(3,4)", "so(4,4)", "sp(6,R)", "su(1,1)", "EI", "EV", "EVIII", "FI", "G"] {
            let r = rec(name);
            assert!(r.flags.split, "{name}");
            assert_eq!(r.diagram.white_count(), r.diagram.base.nodes, "{name}");
            assert!(r.diagram.arrows.is_empty(), "{name}");
        }
    }

    #[test]
    fn exceptional_table_spot_checks() {
        let eiii = rec("EIII");
        assert_eq!(eiii.dim, 78);
        assert_eq!(eiii.rank, 6);
        assert_eq!(eiii.restricted_rank, 2);
        assert!(eiii.flags.hermitian && eiii.flags.inner_type);
        let eix = rec("EIX");
        assert_eq!(eix.dim, 248);
        assert_eq!(eix.restricted_rank, 4);
        assert!(!eix.flags.hermitian && eix.flags.inner_type);
        let fii = rec("FII");
        assert_eq!(fii.dim, 52);
        assert_eq!(fii.restricted_rank, 1);
        let g = rec("G");
        assert_eq!(g.dim, 14);
        assert!(g.flags.split);
    }

    #[test]
    fn complex_records_have_doubled_diagrams() {
        let r = rec("sl(3,C)");
        assert_eq!(r.diagram.base.type_label, "A2+A2");
        assert_eq!(r.diagram.base.nodes, 4);
        assert_eq!(r.rank, 4);
        assert_eq!(r.restricted_rank, 2);
        assert_eq!(r.dim, 16);
        r.validate().unwrap();
    }
}
