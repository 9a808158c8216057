//! Random scenarios and groups shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use pag_cli::scenario::{Analysis, MapSpec, MorphismSpec, ObjectSpec, RhoSpec, Scenario};
use pag_core::cech::{ComplexSpec, SpaceDescriptor, SpaceModel, SpaceMorphism};
use pag_core::gauge::Configuration;
use pag_core::presymplectic::{MixedGroup, PresymplecticGroup};
use pag_core::scalar::rat;
use pag_core::{RatMatrix, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected building block of a region, up to homotopy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Point,
    Interval,
    Disk,
    Polygon(usize),
    Sphere,
}

impl Piece {
    pub fn vertices(self) -> usize {
        match self {
            Piece::Point => 1,
            Piece::Interval => 2,
            Piece::Disk => 3,
            Piece::Polygon(n) => n,
            Piece::Sphere => 4,
        }
    }

    fn maximal(self) -> Vec<Vec<usize>> {
        match self {
            Piece::Point => vec![vec![0]],
            Piece::Interval => vec![vec![0, 1]],
            Piece::Disk => vec![vec![0, 1, 2]],
            Piece::Polygon(n) => (0..n).map(|i| vec![i, (i + 1) % n]).collect(),
            Piece::Sphere => (0..4)
                .map(|s| (0..4).filter(|&v| v != s).collect())
                .collect(),
        }
    }

    fn descriptor(self) -> SpaceDescriptor {
        match self {
            Piece::Point => SpaceDescriptor::named("point"),
            Piece::Interval => SpaceDescriptor::named("interval"),
            Piece::Disk => SpaceDescriptor::Complex {
                complex: ComplexSpec {
                    vertices: 3,
                    simplices: vec![vec![0, 1, 2]],
                },
            },
            Piece::Polygon(n) => SpaceDescriptor::named(&format!("polygon({n})")),
            Piece::Sphere => SpaceDescriptor::named("sphere(2)"),
        }
    }
}

/// Disjoint union of pieces; vertices are numbered piece by piece.
#[derive(Clone, Debug)]
pub struct Space(pub Vec<Piece>);

impl Space {
    pub fn descriptor(&self) -> SpaceDescriptor {
        match self.0.as_slice() {
            [p] => p.descriptor(),
            ps => SpaceDescriptor::DisjointUnion {
                disjoint_union: ps.iter().map(|p| p.descriptor()).collect(),
            },
        }
    }

    fn offset(&self, j: usize) -> usize {
        self.0[..j].iter().map(|p| p.vertices()).sum()
    }

    pub fn model(&self, m: usize) -> Arc<SpaceModel> {
        Arc::new(SpaceModel::from_descriptor(&self.descriptor(), m, false).expect("library space"))
    }
}

/// Every vertex of the piece lands in one simplex of the target piece `j`.
fn collapse(rng: &mut TestRng, n: usize, target: &Space, j: usize) -> Vec<usize> {
    let faces = target.0[j].maximal();
    let face = faces.choose(rng).expect("pieces have simplices");
    let off = target.offset(j);
    (0..n)
        .map(|_| off + face.choose(rng).expect("nonempty face"))
        .collect()
}

/// `n`-gon onto a `k`-gon, `k <= n`, winding once in a random direction.
fn wrap(rng: &mut TestRng, n: usize, k: usize, off: usize) -> Vec<usize> {
    assert!(k <= n);
    let shift = rng.gen_range(0..k);
    let sign = if rng.gen_bool(0.5) { 1 } else { k - 1 };
    (0..n)
        .map(|i| off + (shift + sign * (i * k / n)) % k)
        .collect()
}

fn permute_sphere(rng: &mut TestRng, off: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..4).collect();
    p.shuffle(rng);
    p.into_iter().map(|v| v + off).collect()
}

/// How pieces of a source are sent into the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapStyle {
    /// Circles wind once onto target circles; everything else collapses.
    Winding,
    /// Any simplicial map: winding, sphere permutations or collapses.
    Any,
}

pub fn vertex_map(
    rng: &mut TestRng,
    source: &Space,
    target: &Space,
    style: MapStyle,
) -> Vec<usize> {
    let mut out = Vec::new();
    let circles: Vec<usize> = (0..target.0.len())
        .filter(|&j| matches!(target.0[j], Piece::Polygon(_)))
        .collect();
    let spheres: Vec<usize> = (0..target.0.len())
        .filter(|&j| target.0[j] == Piece::Sphere)
        .collect();
    for &p in &source.0 {
        let structured = style == MapStyle::Winding || rng.gen_bool(0.5);
        let part = match p {
            Piece::Polygon(n) if structured => {
                let fits: Vec<usize> = circles
                    .iter()
                    .copied()
                    .filter(|&j| target.0[j].vertices() <= n)
                    .collect();
                match fits.choose(rng) {
                    Some(&j) => wrap(rng, n, target.0[j].vertices(), target.offset(j)),
                    None => {
                        assert!(
                            style != MapStyle::Winding,
                            "winding maps need a target circle"
                        );
                        let j = rng.gen_range(0..target.0.len());
                        collapse(rng, n, target, j)
                    }
                }
            }
            Piece::Sphere if structured && !spheres.is_empty() => {
                let j = *spheres.choose(rng).expect("nonempty");
                permute_sphere(rng, target.offset(j))
            }
            _ => {
                let j = rng.gen_range(0..target.0.len());
                collapse(rng, p.vertices(), target, j)
            }
        };
        out.extend(part);
    }
    out
}

pub fn random_q_squared(rng: &mut TestRng) -> Rational {
    let choices = [(1, 1), (2, 1), (1, 2), (3, 4)];
    let &(p, q) = choices.choose(rng).expect("nonempty");
    rat(p, q)
}

/// Object data as it goes into a scenario file.
#[derive(Clone, Debug)]
pub struct Obj {
    pub name: String,
    pub space: Space,
    pub q_squared: Rational,
    pub rho: RatMatrix,
}

impl Obj {
    /// Object with a random integral holonomy map.
    pub fn random(rng: &mut TestRng, name: &str, space: Space, m: usize) -> Obj {
        let model = space.model(m);
        let (b1, c) = (model.betti(1), model.betti(m - 2));
        let entries: Vec<i64> = (0..b1 * c).map(|_| rng.gen_range(-2..=2)).collect();
        Obj {
            name: name.into(),
            space,
            q_squared: random_q_squared(rng),
            rho: RatMatrix::from_i64(b1, c, &entries),
        }
    }

    /// Object whose holonomy map is pulled back from `target` along `vm`, so
    /// that the morphism is compatible.
    pub fn pulled_back(
        rng: &mut TestRng,
        name: &str,
        space: Space,
        m: usize,
        target: &Obj,
        vm: &[usize],
    ) -> Obj {
        let f = SpaceMorphism::simplicial(space.model(m), target.space.model(m), vm.to_vec())
            .expect("simplicial");
        let p1 = f.pullback(1).expect("degree 1");
        let pc = f.pullback(m - 2).expect("degree m-2");
        let q_squared = random_q_squared(rng);
        let one = rat(1, 1);
        let rho = (&(&p1 * &target.rho.scale(&(&one / &target.q_squared))) * &pc.transpose())
            .scale(&q_squared);
        Obj {
            name: name.into(),
            space,
            q_squared,
            rho,
        }
    }

    fn spec(&self) -> ObjectSpec {
        ObjectSpec {
            name: self.name.clone(),
            space: self.space.descriptor(),
            compact_cauchy: false,
            rho: Some(RhoSpec::Matrix(self.rho.row_vecs())),
            q_squared: Some(self.q_squared.clone()),
            dyn_pairs: 0,
        }
    }
}

pub fn morphism(name: &str, from: &Obj, to: &Obj, vm: Vec<usize>) -> MorphismSpec {
    MorphismSpec {
        name: name.into(),
        from: from.name.clone(),
        to: to.name.clone(),
        map: MapSpec::VertexMap(vm),
    }
}

pub fn scenario(
    name: &str,
    m: usize,
    objects: &[Obj],
    morphisms: Vec<MorphismSpec>,
    analyses: Vec<Analysis>,
) -> Scenario {
    Scenario {
        name: name.into(),
        description: String::new(),
        dim_m: m,
        objects: objects.iter().map(Obj::spec).collect(),
        morphisms,
        terminal: None,
        analyses,
    }
}

pub fn to_json(s: &Scenario) -> String {
    serde_json::to_string_pretty(s).expect("scenarios serialize")
}

fn piece(rng: &mut TestRng, pool: &[Piece]) -> Piece {
    *pool.choose(rng).expect("nonempty pool")
}

fn source_circle(rng: &mut TestRng) -> Piece {
    Piece::Polygon(rng.gen_range(4..=6))
}

fn target_circle(rng: &mut TestRng) -> Piece {
    Piece::Polygon(rng.gen_range(3..=4))
}

/// One morphism between connected regions of two-dimensional spacetime, with
/// a locality analysis.
pub fn connected_2d(rng: &mut TestRng, tag: usize) -> Scenario {
    let m = 2;
    let src_circle = rng.gen_bool(0.5);
    let src = if src_circle {
        source_circle(rng)
    } else {
        piece(rng, &[Piece::Point, Piece::Interval, Piece::Disk])
    };
    let tgt = if src_circle {
        target_circle(rng)
    } else {
        let c = target_circle(rng);
        piece(rng, &[Piece::Point, Piece::Interval, Piece::Disk, c])
    };
    let (src, tgt) = (Space(vec![src]), Space(vec![tgt]));
    let target = Obj::random(rng, "target", tgt, m);
    let vm = vertex_map(rng, &src, &target.space, MapStyle::Winding);
    let source = Obj::pulled_back(rng, "source", src, m, &target, &vm);
    let f = morphism("f", &source, &target, vm);
    scenario(
        &format!("connected_2d_{tag}"),
        m,
        &[source, target],
        vec![f],
        vec![Analysis::Locality {
            morphism: "f".into(),
        }],
    )
}

fn random_space(rng: &mut TestRng, pool: &[Piece], max: usize) -> Space {
    let n = rng.gen_range(1..=max);
    Space((0..n).map(|_| piece(rng, pool)).collect())
}

/// One morphism over the space library in dimension `m`, inside the class
/// where the two locality criteria are expected to agree: winding maps in
/// dimension 2, any map in dimension 3, sources without first cohomology
/// from dimension 4 on.
pub fn library_morphism(rng: &mut TestRng, m: usize, tag: usize) -> Scenario {
    let contractible = [Piece::Point, Piece::Interval, Piece::Disk];
    let (src, tgt, style) = match m {
        2 => {
            let c = source_circle(rng);
            let src = random_space(rng, &[contractible.as_slice(), &[c]].concat(), 3);
            let t = target_circle(rng);
            let mut tgt = random_space(rng, &[contractible.as_slice(), &[t]].concat(), 2);
            if src.0.iter().any(|p| matches!(p, Piece::Polygon(_)))
                && !tgt.0.iter().any(|p| matches!(p, Piece::Polygon(_)))
            {
                tgt.0.push(target_circle(rng));
            }
            (src, tgt, MapStyle::Winding)
        }
        3 => {
            let c = source_circle(rng);
            let t = target_circle(rng);
            let src = random_space(
                rng,
                &[contractible.as_slice(), &[c, Piece::Sphere]].concat(),
                3,
            );
            let tgt = random_space(
                rng,
                &[contractible.as_slice(), &[t, Piece::Sphere]].concat(),
                2,
            );
            (src, tgt, MapStyle::Any)
        }
        _ => {
            let t = target_circle(rng);
            let src = random_space(
                rng,
                &[contractible.as_slice(), &[Piece::Sphere]].concat(),
                3,
            );
            let tgt = random_space(
                rng,
                &[contractible.as_slice(), &[t, Piece::Sphere]].concat(),
                2,
            );
            (src, tgt, MapStyle::Any)
        }
    };
    let target = Obj::random(rng, "target", tgt, m);
    let vm = vertex_map(rng, &src, &target.space, style);
    let source = Obj::pulled_back(rng, "source", src, m, &target, &vm);
    let f = morphism("f", &source, &target, vm);
    scenario(
        &format!("library_m{m}_{tag}"),
        m,
        &[source, target],
        vec![f],
        vec![Analysis::Locality {
            morphism: "f".into(),
        }],
    )
}

/// Diagram over a terminal object. Each new object maps either to the
/// terminal object or to an earlier object; in the latter case its map to
/// the terminal object is the composite, so every triangle commutes.
pub fn hk_scenario(rng: &mut TestRng, tag: usize) -> Scenario {
    let m = 3;
    let t = target_circle(rng);
    let c = source_circle(rng);
    let pool_t = [Piece::Point, Piece::Interval, Piece::Disk, t, Piece::Sphere];
    let pool = [Piece::Point, Piece::Interval, Piece::Disk, c, Piece::Sphere];
    let space = random_space(rng, &pool_t, 2);
    let terminal = Obj::random(rng, "terminal", space, m);
    let mut objects = vec![terminal];
    let mut to_terminal: Vec<Vec<usize>> =
        vec![(0..objects[0].space.0.iter().map(|p| p.vertices()).sum()).collect()];
    let mut morphisms = Vec::new();
    let n = rng.gen_range(2..=4);
    for i in 1..=n {
        let space = random_space(rng, &pool, 2);
        let via = rng.gen_range(0..i);
        let g = vertex_map(rng, &space, &objects[via].space, MapStyle::Any);
        let h: Vec<usize> = g.iter().map(|&v| to_terminal[via][v]).collect();
        let obj = Obj::pulled_back(rng, &format!("x{i}"), space, m, &objects[0], &h);
        if via != 0 {
            morphisms.push(morphism(&format!("g{i}"), &obj, &objects[via], g));
        }
        morphisms.push(morphism(&format!("h{i}"), &obj, &objects[0], h.clone()));
        objects.push(obj);
        to_terminal.push(h);
    }
    let mut s = scenario(
        &format!("hk_{tag}"),
        m,
        &objects,
        morphisms,
        vec![Analysis::Hk],
    );
    s.terminal = Some("terminal".into());
    s
}

fn small_rational(rng: &mut TestRng) -> Rational {
    let p = rng.gen_range(-12..=12);
    rat(p, rng.gen_range(1..=6))
}

/// Non-integral rational with denominator at most 6.
fn fractional(rng: &mut TestRng) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_integer() {
            return r;
        }
    }
}

/// Configuration pair together with whether it was built gauge-equivalent.
pub fn configuration_pair(rng: &mut TestRng) -> (Configuration, Configuration, bool) {
    let c = rng.gen_range(0..=3);
    let b = rng.gen_range(0..=3);
    let left = Configuration {
        curvature_coords: (0..c).map(|_| small_rational(rng)).collect(),
        holonomy_coords: (0..b).map(|_| small_rational(rng)).collect(),
    };
    let mut right = left.clone();
    for h in &mut right.holonomy_coords {
        *h += rat(rng.gen_range(-3..=3), 1);
    }
    let equivalent = (c == 0 && b == 0) || rng.gen_bool(0.4);
    if !equivalent {
        if c > 0 && (b == 0 || rng.gen_bool(0.5)) {
            let i = rng.gen_range(0..c);
            let mut d = small_rational(rng);
            if d == rat(0, 1) {
                d = rat(1, 1);
            }
            right.curvature_coords[i] += d;
        } else {
            let i = rng.gen_range(0..b);
            right.holonomy_coords[i] += fractional(rng);
        }
    }
    (left, right, equivalent)
}

/// Lattice or divisible direction of a random group, or a missing one.
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Lattice(Rational),
    Divisible,
    Absent,
}

/// `B = U·(⊕ slots)` with a unimodular `U`, together with the data needed to
/// decide membership without the library.
#[derive(Clone, Debug)]
pub struct WindowGroup {
    pub pag: PresymplecticGroup,
    pub u: RatMatrix,
    pub slots: Vec<Slot>,
}

impl WindowGroup {
    pub fn random(rng: &mut TestRng) -> WindowGroup {
        let n = rng.gen_range(1..=3);
        let scales = [
            (1, 1),
            (2, 1),
            (3, 1),
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (3, 4),
        ];
        let slots: Vec<Slot> = (0..n)
            .map(|_| match rng.gen_range(0..5) {
                0 => Slot::Divisible,
                1 => Slot::Absent,
                _ => {
                    let &(p, q) = scales.choose(rng).expect("nonempty");
                    Slot::Lattice(rat(p, q))
                }
            })
            .collect();
        let mut u = RatMatrix::identity(n);
        for _ in 0..(2 * n) {
            if n < 2 {
                break;
            }
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = rat(rng.gen_range(-2..=2), 1);
            // column operation: col_j += c * col_i
            for r in 0..n {
                let add = &u[(r, i)] * &c;
                u[(r, j)] += add;
            }
        }
        let mut s = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
                s[(j, i)] = -v.clone();
                s[(i, j)] = v;
            }
        }
        let col = |i: usize, scale: &Rational| -> Vec<Rational> {
            u.column(i).iter().map(|x| x * scale).collect()
        };
        let mut free = Vec::new();
        let mut div = Vec::new();
        for (i, slot) in slots.iter().enumerate() {
            match slot {
                Slot::Lattice(sc) => free.push(col(i, sc)),
                Slot::Divisible => div.push(col(i, &rat(1, 1))),
                Slot::Absent => {}
            }
        }
        let group = MixedGroup::new(
            n,
            &RatMatrix::from_columns(n, &free).expect("columns"),
            &RatMatrix::from_columns(n, &div).expect("columns"),
        )
        .expect("valid generators");
        let pag = PresymplecticGroup::new(group, s).expect("antisymmetric");
        WindowGroup { pag, u, slots }
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    /// `U·y`.
    pub fn point(&self, y: &[Rational]) -> Vec<Rational> {
        self.u.mul_vec(y)
    }

    /// Membership read off the slot coordinates `y` of `x = U·y`.
    pub fn contains_coords(&self, y: &[Rational]) -> bool {
        self.slots.iter().zip(y).all(|(s, v)| match s {
            Slot::Lattice(sc) => (v / sc).is_integer(),
            Slot::Divisible => true,
            Slot::Absent => *v == rat(0, 1),
        })
    }

    /// Window of slot coordinates around the origin, including points
    /// outside the group.
    pub fn window(&self) -> Vec<Vec<Rational>> {
        let base: Vec<Rational> = [-12, -6, -4, -3, 0, 3, 4, 6, 12]
            .iter()
            .map(|&k| rat(k, 12))
            .collect();
        let axes: Vec<Vec<Rational>> = self
            .slots
            .iter()
            .map(|s| {
                let mut v = base.clone();
                if let Slot::Lattice(sc) = s {
                    for k in [(-1, 1), (2, 1), (1, 2), (3, 1)] {
                        v.push(sc * rat(k.0, k.1));
                    }
                }
                v
            })
            .collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            out = out
                .into_iter()
                .flat_map(|p: Vec<Rational>| {
                    axis.iter().map(move |a| {
                        let mut q = p.clone();
                        q.push(a.clone());
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Finite family of group elements whose pairings decide centrality:
    /// every lattice generator, and divisible generators scaled by `1`,
    /// `1/2`, `1/3` and `1/10007`. Pairing numerators in the window stay far
    /// below 10007, so a nonzero pairing with a divisible direction always
    /// shows up as a non-integer.
    pub fn probes(&self) -> Vec<Vec<Rational>> {
        let n = self.n();
        let mut out = Vec::new();
        for (i, s) in self.slots.iter().enumerate() {
            let scales = match s {
                Slot::Lattice(sc) => vec![sc.clone()],
                Slot::Divisible => vec![rat(1, 1), rat(1, 2), rat(1, 3), rat(1, 10007)],
                Slot::Absent => vec![],
            };
            for sc in scales {
                let y: Vec<Rational> = (0..n)
                    .map(|j| if i == j { sc.clone() } else { rat(0, 1) })
                    .collect();
                out.push(self.point(&y));
            }
        }
        out
    }
}
