use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cohomology::{cohomology, CohomologyGroup, Ring};
use super::complex::SimplicialComplex;
use super::CechError;
use crate::linalg::{smith_normal_form, FgAbelianGroup};
use crate::IntMatrix;

/// Cohomology data of a space that is not triangulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCohomology {
    groups: Vec<FgAbelianGroup>,
}

impl FormalCohomology {
    /// Integral cohomology per degree; trailing trivial groups are trimmed.
    pub fn new(mut groups: Vec<FgAbelianGroup>) -> Self {
        while groups.last().is_some_and(FgAbelianGroup::is_trivial) {
            groups.pop();
        }
        FormalCohomology { groups }
    }

    pub fn from_betti(betti: &[usize]) -> Self {
        Self::new(betti.iter().map(|&b| FgAbelianGroup::free(b)).collect())
    }

    pub fn group(&self, k: usize) -> FgAbelianGroup {
        self.groups
            .get(k)
            .cloned()
            .unwrap_or_else(|| FgAbelianGroup::free(0))
    }

    pub fn top_degree(&self) -> usize {
        self.groups.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceBody {
    Complex(SimplicialComplex),
    Formal(FormalCohomology),
}

impl SpaceBody {
    pub fn integer_cohomology(&self, k: usize) -> FgAbelianGroup {
        match self {
            SpaceBody::Complex(c) => {
                if c.dimension().is_some_and(|d| k <= d) {
                    cohomology(c, k, Ring::Integer).presentation
                } else {
                    FgAbelianGroup::free(0)
                }
            }
            SpaceBody::Formal(f) => f.group(k),
        }
    }

    pub fn top_degree(&self) -> usize {
        match self {
            SpaceBody::Complex(c) => c.dimension().unwrap_or(0),
            SpaceBody::Formal(f) => f.top_degree(),
        }
    }

    fn to_formal(&self) -> FormalCohomology {
        match self {
            SpaceBody::Formal(f) => f.clone(),
            SpaceBody::Complex(_) => FormalCohomology::new(
                (0..=self.top_degree())
                    .map(|k| self.integer_cohomology(k))
                    .collect(),
            ),
        }
    }
}

/// A spacetime region up to homotopy: cohomological body plus the metadata
/// the observable models need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceModel {
    body: SpaceBody,
    dim_m: usize,
    oriented: bool,
    connected_components: usize,
    compact_cauchy: bool,
    label: String,
}

impl SpaceModel {
    pub fn new(
        body: SpaceBody,
        dim_m: usize,
        oriented: bool,
        compact_cauchy: bool,
    ) -> Result<Self, CechError> {
        if dim_m < 2 {
            return Err(CechError::InvalidSpace(format!(
                "spacetime dimension {dim_m} < 2"
            )));
        }
        if !oriented {
            return Err(CechError::NotOriented);
        }
        // a globally hyperbolic m-manifold retracts onto an (m-1)-manifold
        for k in dim_m..=body.top_degree().max(dim_m) {
            if !body.integer_cohomology(k).is_trivial() {
                return Err(CechError::InvalidSpace(format!(
                    "nonzero cohomology in degree {k} >= dimension {dim_m}"
                )));
            }
        }
        let connected_components = match &body {
            SpaceBody::Complex(c) => c.connected_components(),
            SpaceBody::Formal(f) => f.group(0).free_rank,
        };
        let label = match &body {
            SpaceBody::Complex(c) => format!("complex({} vertices)", c.vertex_count()),
            SpaceBody::Formal(_) => "formal".into(),
        };
        Ok(SpaceModel {
            body,
            dim_m,
            oriented,
            connected_components,
            compact_cauchy,
            label,
        })
    }

    pub fn from_descriptor(
        descriptor: &SpaceDescriptor,
        dim_m: usize,
        compact_cauchy: bool,
    ) -> Result<Self, CechError> {
        let mut model = SpaceModel::new(descriptor.build()?, dim_m, true, compact_cauchy)?;
        model.label = descriptor.to_string();
        Ok(model)
    }

    pub fn body(&self) -> &SpaceBody {
        &self.body
    }

    pub fn complex(&self) -> Option<&SimplicialComplex> {
        match &self.body {
            SpaceBody::Complex(c) => Some(c),
            SpaceBody::Formal(_) => None,
        }
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn oriented(&self) -> bool {
        self.oriented
    }

    pub fn connected_components(&self) -> usize {
        self.connected_components
    }

    pub fn compact_cauchy(&self) -> bool {
        self.compact_cauchy
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Rational Betti number in degree `k`.
    pub fn betti(&self, k: usize) -> usize {
        self.body.integer_cohomology(k).free_rank
    }

    pub fn integer_cohomology(&self, k: usize) -> FgAbelianGroup {
        self.body.integer_cohomology(k)
    }

    /// Integral cohomology with representatives, for triangulated bodies. The
    /// free representatives are the basis every map in this crate is written in.
    pub fn basis_group(&self, k: usize) -> Option<CohomologyGroup> {
        self.complex().map(|c| cohomology(c, k, Ring::Integer))
    }
}

/// `H^k_c(X; Q)`, realized as the dual of `H^{m-k}(X; Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompactSupportGroup {
    pub degree: usize,
    pub dual_degree: usize,
    pub dimension: usize,
}

pub fn compact_support_group(x: &SpaceModel, k: usize) -> Result<CompactSupportGroup, CechError> {
    if !x.oriented() {
        return Err(CechError::NotOriented);
    }
    let dual_degree = x
        .dim_m()
        .checked_sub(k)
        .ok_or(CechError::DegreeOutOfRange {
            degree: k,
            dim_m: x.dim_m(),
        })?;
    Ok(CompactSupportGroup {
        degree: k,
        dual_degree,
        dimension: x.betti(dual_degree),
    })
}

/// Scenario-facing description of a space.
///
/// Strings use the constructor syntax `point`, `interval`, `circle`,
/// `polygon(n)`, `sphere(k)`, `disjoint_union[a, b, ...]` and
/// `formal_product[a, b, ...]`. Explicit complexes and raw cohomology data
/// use the object forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceDescriptor {
    Named(String),
    Complex {
        complex: ComplexSpec,
    },
    DisjointUnion {
        disjoint_union: Vec<SpaceDescriptor>,
    },
    FormalProduct {
        formal_product: Vec<SpaceDescriptor>,
    },
    Formal {
        formal: FormalSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

/// Betti numbers plus optional torsion invariants per degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSpec {
    pub betti: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub torsion: Vec<Vec<u64>>,
}

impl SpaceDescriptor {
    pub fn named(s: &str) -> Self {
        SpaceDescriptor::Named(s.to_string())
    }

    pub fn build(&self) -> Result<SpaceBody, CechError> {
        match self {
            SpaceDescriptor::Named(s) => parse_constructor(s)?.build(),
            SpaceDescriptor::Complex { complex } => Ok(SpaceBody::Complex(SimplicialComplex::new(
                complex.vertices,
                complex.simplices.clone(),
            )?)),
            SpaceDescriptor::DisjointUnion { disjoint_union } => {
                let parts = disjoint_union
                    .iter()
                    .map(SpaceDescriptor::build)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(disjoint_union_of(&parts))
            }
            SpaceDescriptor::FormalProduct { formal_product } => {
                let parts = formal_product
                    .iter()
                    .map(SpaceDescriptor::build)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(SpaceBody::Formal(kunneth_product(&parts)))
            }
            SpaceDescriptor::Formal { formal } => {
                let mut groups = Vec::new();
                for (k, &b) in formal.betti.iter().enumerate() {
                    let tors: Vec<BigInt> = formal
                        .torsion
                        .get(k)
                        .map(|t| t.iter().map(|&x| BigInt::from(x)).collect())
                        .unwrap_or_default();
                    groups.push(normalize_cyclic(b, &tors));
                }
                Ok(SpaceBody::Formal(FormalCohomology::new(groups)))
            }
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, name: &str, parts: &[SpaceDescriptor]) -> fmt::Result {
            write!(f, "{name}[")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "]")
        }
        match self {
            SpaceDescriptor::Named(s) => write!(f, "{s}"),
            SpaceDescriptor::Complex { complex } => {
                write!(
                    f,
                    "complex{{{}, {:?}}}",
                    complex.vertices, complex.simplices
                )
            }
            SpaceDescriptor::DisjointUnion { disjoint_union } => {
                list(f, "disjoint_union", disjoint_union)
            }
            SpaceDescriptor::FormalProduct { formal_product } => {
                list(f, "formal_product", formal_product)
            }
            SpaceDescriptor::Formal { formal } => write!(f, "formal{:?}", formal.betti),
        }
    }
}

/// Parses the string constructor syntax into a structured descriptor.
fn parse_constructor(s: &str) -> Result<ParsedSpace, CechError> {
    let mut p = Parser { src: s, pos: 0 };
    let out = p.space()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(CechError::UnknownConstructor(s.to_string()));
    }
    Ok(out)
}

enum ParsedSpace {
    Leaf(SimplicialComplex),
    Union(Vec<ParsedSpace>),
    Product(Vec<ParsedSpace>),
}

impl ParsedSpace {
    fn build(self) -> Result<SpaceBody, CechError> {
        match self {
            ParsedSpace::Leaf(c) => Ok(SpaceBody::Complex(c)),
            ParsedSpace::Union(parts) => {
                let parts = parts
                    .into_iter()
                    .map(ParsedSpace::build)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(disjoint_union_of(&parts))
            }
            ParsedSpace::Product(parts) => {
                let parts = parts
                    .into_iter()
                    .map(ParsedSpace::build)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(SpaceBody::Formal(kunneth_product(&parts)))
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<usize, CechError> {
        let text = self.ident().to_string();
        text.parse()
            .map_err(|_| CechError::UnknownConstructor(self.src.to_string()))
    }

    fn space(&mut self) -> Result<ParsedSpace, CechError> {
        let unknown = || CechError::UnknownConstructor(self.src.to_string());
        let name = self.ident().to_string();
        match name.as_str() {
            "point" => Ok(ParsedSpace::Leaf(SimplicialComplex::point())),
            "interval" => Ok(ParsedSpace::Leaf(SimplicialComplex::interval())),
            "circle" => Ok(ParsedSpace::Leaf(SimplicialComplex::circle())),
            "sphere" | "polygon" => {
                if !self.eat('(') {
                    return Err(unknown());
                }
                let n = self.number()?;
                if !self.eat(')') {
                    return Err(unknown());
                }
                if name == "sphere" {
                    Ok(ParsedSpace::Leaf(SimplicialComplex::sphere(n)))
                } else {
                    Ok(ParsedSpace::Leaf(SimplicialComplex::polygon(n)?))
                }
            }
            "disjoint_union" | "formal_product" => {
                if !self.eat('[') {
                    return Err(unknown());
                }
                let mut parts = Vec::new();
                if !self.eat(']') {
                    loop {
                        parts.push(self.space()?);
                        if self.eat(']') {
                            break;
                        }
                        if !self.eat(',') {
                            return Err(unknown());
                        }
                    }
                }
                Ok(if name == "disjoint_union" {
                    ParsedSpace::Union(parts)
                } else {
                    ParsedSpace::Product(parts)
                })
            }
            _ => Err(unknown()),
        }
    }
}

fn disjoint_union_of(parts: &[SpaceBody]) -> SpaceBody {
    let complexes: Option<Vec<SimplicialComplex>> = parts
        .iter()
        .map(|p| match p {
            SpaceBody::Complex(c) => Some(c.clone()),
            SpaceBody::Formal(_) => None,
        })
        .collect();
    if let Some(cs) = complexes {
        return SpaceBody::Complex(SimplicialComplex::disjoint_union(&cs));
    }
    let top = parts.iter().map(SpaceBody::top_degree).max().unwrap_or(0);
    let groups = (0..=top)
        .map(|k| {
            let mut free = 0;
            let mut tors = Vec::new();
            for p in parts {
                let g = p.integer_cohomology(k);
                free += g.free_rank;
                tors.extend(g.torsion_invariants);
            }
            normalize_cyclic(free, &tors)
        })
        .collect();
    SpaceBody::Formal(FormalCohomology::new(groups))
}

/// Integral Künneth formula, including the Tor terms.
fn kunneth_product(parts: &[SpaceBody]) -> FormalCohomology {
    let mut acc = FormalCohomology::from_betti(&[1]);
    for p in parts {
        let other = p.to_formal();
        let top = acc.top_degree() + other.top_degree() + 1;
        let mut groups = Vec::new();
        for n in 0..=top {
            let mut free = 0;
            let mut tors = Vec::new();
            for i in 0..=n {
                let (a, b) = (acc.group(i), other.group(n - i));
                // tensor products
                free += a.free_rank * b.free_rank;
                for t in &a.torsion_invariants {
                    tors.extend(std::iter::repeat_n(t.clone(), b.free_rank));
                }
                for t in &b.torsion_invariants {
                    tors.extend(std::iter::repeat_n(t.clone(), a.free_rank));
                }
                for s in &a.torsion_invariants {
                    for t in &b.torsion_invariants {
                        tors.push(s.gcd(t));
                    }
                }
            }
            // Tor terms from degree pairs summing to n + 1
            for i in 0..=n + 1 {
                let (a, b) = (acc.group(i), other.group(n + 1 - i));
                for s in &a.torsion_invariants {
                    for t in &b.torsion_invariants {
                        tors.push(s.gcd(t));
                    }
                }
            }
            groups.push(normalize_cyclic(free, &tors));
        }
        acc = FormalCohomology::new(groups);
    }
    acc
}

/// `Z^free ⊕ ⊕ Z/t` in invariant-factor form.
fn normalize_cyclic(free: usize, torsion: &[BigInt]) -> FgAbelianGroup {
    let orders: Vec<BigInt> = torsion
        .iter()
        .filter(|t| !t.is_one() && !t.is_zero())
        .cloned()
        .collect();
    let n = orders.len();
    let snf = smith_normal_form(&IntMatrix::diagonal(n, n, &orders));
    FgAbelianGroup {
        free_rank: free,
        torsion_invariants: snf
            .invariant_factors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect(),
    }
}
