//! The tree of `PGL_2` and the oriented chain complex of the coefficient
//! system `F -> V^(I_F)` on a finite ball around `x_0`.
//!
//! Vertices are lattice classes `g O^2`. The base edge `C` joins `x_0 = O^2`
//! and `x_1 = diag(1, t) O^2`. Every edge is stored as `g C` oriented from
//! `g x_0` (the endpoint closer to `x_0`) to `g x_1`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::character::PrincipalSeriesChar;
use crate::group::{is_member, standard_facet_generators, GroupMat, SubgroupSpec};
use crate::linalg::{ExactMatrix, Field, RatFunc, Scalar, SparseEchelon};
use crate::principal::{fixed_vectors_general, subgroup_generators, InductionModel};
use crate::weyl::ApartmentFacet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("ball radius {0} exceeds the supported maximum 4")]
    TooLarge(usize),
    #[error("model level {have} is below radius + 2 = {needed}")]
    Margin { needed: usize, have: usize },
    #[error("coefficient space of edge {edge} is not contained in the space of vertex {vertex}")]
    Inclusion { edge: usize, vertex: usize },
    #[error("only GL_2 is supported, got n = {0}")]
    Rank(usize),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub rep: GroupMat,
    pub dist: usize,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub rep: GroupMat,
}

#[derive(Clone, Debug)]
pub struct TreeBall {
    pub q: u32,
    pub radius: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// `g x_0 = h x_0` iff `h^-1 g` lies in `t^Z GL_2(O)`.
pub fn same_vertex(g: &GroupMat, h: &GroupMat) -> bool {
    let x = h.inverse().mul(g);
    x.det().val() == Some(2 * x.min_val())
}

fn mat(q: u32, rows: [[(i64, i64); 2]; 2]) -> GroupMat {
    GroupMat::from_monomials(2, q, &[rows[0].to_vec(), rows[1].to_vec()]).expect("invertible")
}

/// The `q + 1` neighbours of `x_0` as `(n, k)` with `n x_0` the neighbour
/// and `k` in `K` carrying `C` onto the edge towards it.
fn steps(q: u32) -> Vec<(GroupMat, GroupMat)> {
    let mut out = vec![(mat(q, [[(1, 0), (0, 0)], [(0, 0), (1, 1)]]), GroupMat::identity(2, q))];
    for c in 0..q as i64 {
        out.push((mat(q, [[(1, 1), (c, 0)], [(0, 0), (1, 0)]]), mat(q, [[(c, 0), (1, 0)], [(1, 0), (0, 0)]])));
    }
    out
}

pub fn expected_vertex_count(q: u32, r: usize) -> usize {
    let q = q as usize;
    1 + (q + 1) * (q.pow(r as u32) - 1) / (q - 1)
}

/// Breadth-first ball of radius `r`; each new vertex is its parent's
/// representative times a one-step matrix.
pub fn build_ball(r: usize, q: u32) -> Result<TreeBall, TreeError> {
    if r > 4 {
        return Err(TreeError::TooLarge(r));
    }
    let st = steps(q);
    let mut vertices = vec![Vertex { rep: GroupMat::identity(2, q), dist: 0 }];
    let mut edges = Vec::new();
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut frontier = vec![0];
    for d in 1..=r {
        let mut next = Vec::new();
        for &p in &frontier {
            let prep = vertices[p].rep.clone();
            for (n, k) in &st {
                let rep = prep.mul(n);
                if let Some(gp) = parent[p] {
                    if same_vertex(&rep, &vertices[gp].rep) {
                        continue;
                    }
                }
                let idx = vertices.len();
                vertices.push(Vertex { rep, dist: d });
                parent.push(Some(p));
                edges.push(Edge { tail: p, head: idx, rep: prep.mul(k) });
                next.push(idx);
            }
        }
        frontier = next;
    }
    Ok(TreeBall { q, radius: r, vertices, edges })
}

/// `V^(I_F)` for a facet `g F` of the ball, inside the `K_m` model.
#[derive(Clone, Debug)]
pub struct CoefficientSpace {
    pub basis: Vec<Vec<Scalar>>,
    /// `basis[k]` is the only basis vector nonzero at `points[k]`.
    pub points: Vec<usize>,
}

impl CoefficientSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` if it lies in the span.
    pub fn coordinates(&self, field: &Field, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self
            .basis
            .iter()
            .zip(&self.points)
            .map(|(b, &p)| field.div(&v[p], &b[p]).expect("nonzero at its point"))
            .collect();
        let mut w = vec![field.zero(); v.len()];
        for (b, x) in self.basis.iter().zip(&c) {
            for (y, z) in w.iter_mut().zip(b) {
                *y = field.add(y, &field.mul(x, z));
            }
        }
        (w == v).then_some(c)
    }
}

/// Fixed space of `g I_F g^-1` where `F` is `x_0` or `C` and `g` has
/// integral entries with `val det g = d`.
pub fn coefficient_space(
    model: &InductionModel,
    g: &GroupMat,
    facet: &ApartmentFacet,
    d: usize,
) -> CoefficientSpace {
    let q = model.chi().q();
    let m = model.level();
    let g_inv = g.inverse();
    // g K_(m+d) g^-1 lies in K_m, so these generate g I_F g^-1 modulo K_m
    let gens: Vec<GroupMat> =
        standard_facet_generators(2, q, facet, m + d).iter().map(|h| g.mul(h).mul(&g_inv)).collect();
    let inv = fixed_vectors_general(model, &gens);
    CoefficientSpace { basis: inv.basis, points: inv.points }
}

fn margin_holds(g: &GroupMat, facet: &ApartmentFacet, m: usize) -> bool {
    let q = g.q();
    let g_inv = g.inverse();
    let spec = SubgroupSpec::facet(facet, q);
    standard_facet_generators(2, q, &ApartmentFacet::chamber(2), m + 1)
        .iter()
        .filter(|h| is_member(h, &SubgroupSpec::Km(m)))
        .all(|h| is_member(&g_inv.mul(h).mul(g), &spec))
}

/// The complex `C_1 -> C_0 -> V` restricted to a ball.
#[derive(Clone, Debug)]
pub struct BallComplex {
    pub ball: TreeBall,
    pub model: InductionModel,
    pub vertex_spaces: Vec<CoefficientSpace>,
    pub edge_spaces: Vec<CoefficientSpace>,
    /// Start of each vertex block among 0-chain coordinates.
    pub vertex_offsets: Vec<usize>,
    pub edge_offsets: Vec<usize>,
    /// Columns: edge basis chains; rows: vertex basis chains.
    pub boundary: ExactMatrix,
    /// Columns: vertex basis chains; rows: model coordinates.
    pub augmentation: ExactMatrix,
}

fn offsets(spaces: &[CoefficientSpace]) -> Vec<usize> {
    let mut out = Vec::with_capacity(spaces.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in spaces {
        acc += s.dim();
        out.push(acc);
    }
    out
}

/// Builds coefficient spaces for every facet of the ball and assembles
/// `boundary` (head minus tail) and `augmentation` (sum into `V`).
pub fn boundary_and_augmentation(
    ball: &TreeBall,
    chi: &PrincipalSeriesChar,
    m: usize,
) -> Result<BallComplex, TreeError> {
    if chi.n() != 2 {
        return Err(TreeError::Rank(chi.n()));
    }
    if m < ball.radius + 2 {
        return Err(TreeError::Margin { needed: ball.radius + 2, have: m });
    }
    let field = chi.field().clone();
    let x0 = ApartmentFacet::base_vertex(2);
    let c = ApartmentFacet::chamber(2);
    let model = InductionModel::new(chi, m);
    for v in &ball.vertices {
        assert!(margin_holds(&v.rep, &x0, m), "K_{m} not inside the vertex group at distance {}", v.dist);
    }
    let vertex_spaces: Vec<CoefficientSpace> =
        ball.vertices.par_iter().map(|v| coefficient_space(&model, &v.rep, &x0, v.dist)).collect();
    let edge_spaces: Vec<CoefficientSpace> = ball
        .edges
        .par_iter()
        .map(|e| coefficient_space(&model, &e.rep, &c, ball.vertices[e.tail].dist))
        .collect();
    let vertex_offsets = offsets(&vertex_spaces);
    let edge_offsets = offsets(&edge_spaces);
    let rows0 = vertex_offsets[ball.vertices.len()];
    let mut boundary = vec![vec![field.zero(); edge_offsets[ball.edges.len()]]; rows0];
    for (ei, e) in ball.edges.iter().enumerate() {
        for (k, b) in edge_spaces[ei].basis.iter().enumerate() {
            let col = edge_offsets[ei] + k;
            for (v, sign) in [(e.head, field.one()), (e.tail, field.from_i64(-1))] {
                let coords = vertex_spaces[v]
                    .coordinates(&field, b)
                    .ok_or(TreeError::Inclusion { edge: ei, vertex: v })?;
                for (j, x) in coords.iter().enumerate() {
                    boundary[vertex_offsets[v] + j][col] = field.mul(&sign, x);
                }
            }
        }
    }
    let mut aug = vec![vec![field.zero(); rows0]; model.dim()];
    for (vi, s) in vertex_spaces.iter().enumerate() {
        for (k, b) in s.basis.iter().enumerate() {
            for (i, x) in b.iter().enumerate() {
                aug[i][vertex_offsets[vi] + k] = x.clone();
            }
        }
    }
    let boundary = ExactMatrix::from_rows(&field, boundary).expect("same field");
    let augmentation = ExactMatrix::from_rows(&field, aug).expect("same field");
    Ok(BallComplex {
        ball: ball.clone(),
        model,
        vertex_spaces,
        edge_spaces,
        vertex_offsets,
        edge_offsets,
        boundary,
        augmentation,
    })
}

/// The complex restricted to the sub-ball of radius `r`: the vertex and
/// edge blocks with all endpoints within distance `r`.
fn sub_ranks(cx: &BallComplex, r: usize) -> (usize, usize, usize, usize, usize) {
    let field = cx.model.field();
    let vs: Vec<usize> = (0..cx.ball.vertices.len()).filter(|&v| cx.ball.vertices[v].dist <= r).collect();
    let es: Vec<usize> = (0..cx.ball.edges.len()).filter(|&e| cx.ball.vertices[cx.ball.edges[e].head].dist <= r).collect();
    let vcols: Vec<usize> = vs.iter().flat_map(|&v| cx.vertex_offsets[v]..cx.vertex_offsets[v + 1]).collect();
    let ecols: Vec<usize> = es.iter().flat_map(|&e| cx.edge_offsets[e]..cx.edge_offsets[e + 1]).collect();
    let column_rank = |m: &ExactMatrix, cols: &[usize]| -> usize {
        let mut ech = SparseEchelon::new(field);
        for &c in cols {
            let col = (0..m.rows())
                .filter_map(|i| {
                    let x = m.get(i, c);
                    (!field.is_zero(x)).then(|| (i, x.clone()))
                })
                .collect();
            ech.insert(&col);
        }
        ech.rank()
    };
    let rank_d = column_rank(&cx.boundary, &ecols);
    let rank_e = column_rank(&cx.augmentation, &vcols);
    (vcols.len(), ecols.len(), rank_d, rank_e, vs.len())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RadiusReport {
    pub radius: usize,
    pub vertices: usize,
    pub edges: usize,
    pub chains0: usize,
    pub chains1: usize,
    pub rank_boundary: usize,
    pub kernel_augmentation: usize,
    pub rank_augmentation: usize,
    /// `dim V^(K_(r+1))`.
    pub probe_dim: usize,
    pub probe_contained: bool,
    pub e1: bool,
    pub e2: bool,
    pub e3: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ExactnessReport {
    pub q: u32,
    pub level: usize,
    pub composite_zero: bool,
    pub vertex_dims: Vec<usize>,
    pub edge_dims: Vec<usize>,
    pub radii: Vec<RadiusReport>,
    pub passed: bool,
    pub statement: String,
}

/// E1 (`boundary` injective), E2 (`dim ker augmentation = rank boundary`)
/// and E3 (the image of `augmentation` is `V^(K_(r+1))`, so its rank grows)
/// on every sub-ball of radius at most the ball's radius.
pub fn exactness_report(cx: &BallComplex) -> ExactnessReport {
    let field = cx.model.field();
    let composite_zero = cx.augmentation.mul(&cx.boundary).map(|m| m.is_zero()).unwrap_or(false);
    let mut radii = Vec::new();
    let mut last_rank = 0;
    for r in 0..=cx.ball.radius {
        let (c0, c1, rank_d, rank_e, nv) = sub_ranks(cx, r);
        let probe = subgroup_generators(&SubgroupSpec::Km(r + 1), 2, cx.model.chi().q(), cx.model.level())
            .map(|g| crate::principal::fixed_vectors(&cx.model, &g).basis)
            .unwrap_or_default();
        let image: Vec<Vec<Scalar>> = cx
            .vertex_spaces
            .iter()
            .zip(&cx.ball.vertices)
            .filter(|(_, v)| v.dist <= r)
            .flat_map(|(s, _)| s.basis.iter().cloned())
            .collect();
        let mut ech = SparseEchelon::new(field);
        for v in &image {
            ech.insert(&sparse(field, v));
        }
        let before = ech.rank();
        let probe_contained = probe.iter().all(|p| !ech.clone().insert(&sparse(field, p)));
        let e3 = probe_contained && before == probe.len() && before >= last_rank;
        last_rank = before;
        radii.push(RadiusReport {
            radius: r,
            vertices: nv,
            edges: c1 / cx.edge_spaces.first().map_or(1, |s| s.dim().max(1)),
            chains0: c0,
            chains1: c1,
            rank_boundary: rank_d,
            kernel_augmentation: c0 - rank_e,
            rank_augmentation: rank_e,
            probe_dim: probe.len(),
            probe_contained,
            e1: rank_d == c1,
            e2: c0 - rank_e == rank_d,
            e3,
        });
    }
    let vertex_dims: Vec<usize> = cx.vertex_spaces.iter().map(|s| s.dim()).collect();
    let edge_dims: Vec<usize> = cx.edge_spaces.iter().map(|s| s.dim()).collect();
    let constant = |d: &[usize]| d.windows(2).all(|w| w[0] == w[1]);
    let passed = composite_zero
        && constant(&vertex_dims)
        && constant(&edge_dims)
        && radii.iter().all(|r| r.e1 && r.e2 && r.e3);
    ExactnessReport {
        q: cx.ball.q,
        level: cx.model.level(),
        composite_zero,
        vertex_dims,
        edge_dims,
        radii,
        passed,
        statement: "ball-restricted exactness of the oriented chain complex, consistent with exactness of the full resolution; not a proof of it".into(),
    }
}

fn sparse(field: &Field, v: &[Scalar]) -> std::collections::BTreeMap<usize, Scalar> {
    v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OrbitReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub counts_match: bool,
    pub vertices_distinct: bool,
    pub ball_closed: bool,
    pub facets_are_translates: bool,
    pub reverser_swaps_base_edge: bool,
    pub reverser_normalizes: bool,
    pub reverser_preserves_edge_space: bool,
    pub reverser_square_scalar: bool,
    pub boundary_equivariant: bool,
    pub twist_trivial: bool,
    pub passed: bool,
}

/// One orbit of vertices and one of edges, and the base edge reversal by
/// `antidiag(1, t)` acting on the base edge space through the orientation
/// sign.
pub fn orbit_decomposition_check(cx: &BallComplex) -> OrbitReport {
    let ball = &cx.ball;
    let q = ball.q;
    let field = cx.model.field();
    let nv = ball.vertices.len();
    let counts_match =
        nv == expected_vertex_count(q, ball.radius) && ball.edges.len() == nv - 1;
    let vertices_distinct =
        (0..nv).all(|a| (a + 1..nv).all(|b| !same_vertex(&ball.vertices[a].rep, &ball.vertices[b].rep)));
    let find = |g: &GroupMat| (0..nv).find(|&v| same_vertex(g, &ball.vertices[v].rep));
    let st = steps(q);
    let ball_closed = ball
        .vertices
        .iter()
        .filter(|v| v.dist < ball.radius)
        .all(|v| st.iter().all(|(n, _)| find(&v.rep.mul(n)).is_some()));
    let x1 = mat(q, [[(1, 0), (0, 0)], [(0, 0), (1, 1)]]);
    let facets_are_translates = ball.edges.iter().all(|e| {
        same_vertex(&e.rep, &ball.vertices[e.tail].rep) && same_vertex(&e.rep.mul(&x1), &ball.vertices[e.head].rep)
    });
    let pi = mat(q, [[(0, 0), (1, 0)], [(1, 1), (0, 0)]]);
    let id = GroupMat::identity(2, q);
    let reverser_swaps_base_edge = same_vertex(&pi, &x1) && same_vertex(&pi.mul(&x1), &id);
    let pi_inv = pi.inverse();
    let iw = SubgroupSpec::ProPIwahori;
    let reverser_normalizes = standard_facet_generators(2, q, &ApartmentFacet::chamber(2), 3)
        .iter()
        .all(|h| is_member(&pi.mul(h).mul(&pi_inv), &iw) && is_member(&pi_inv.mul(h).mul(&pi), &iw));
    // the base edge is edge 0, from vertex 0 = x_0 to vertex 1 = x_1
    let base = &cx.edge_spaces[0];
    let moved: Vec<Vec<Scalar>> = base.basis.iter().map(|b| cx.model.translate(b, &pi)).collect();
    let reverser_preserves_edge_space = moved.iter().all(|v| base.coordinates(field, v).is_some());
    let z = cx.model.chi().on_diagonal(&[RatFunc::t(q), RatFunc::t(q)]);
    let reverser_square_scalar = base.basis.iter().zip(&moved).all(|(b, pb)| {
        let want: Vec<Scalar> = b.iter().map(|x| field.mul(&z, x)).collect();
        cx.model.translate(pb, &pi) == want
    });
    // pi (C, v) = -(C, pi v) since pi reverses C; its boundary must be pi
    // applied to x_1 (x) v - x_0 (x) v, that is x_0 (x) pi v - x_1 (x) pi v
    let rows0 = cx.boundary.rows();
    let boundary_equivariant = reverser_preserves_edge_space
        && moved.iter().all(|pb| {
            let c = base.coordinates(field, pb).expect("checked");
            let lhs: Vec<Scalar> = (0..rows0)
                .map(|i| {
                    let mut acc = field.zero();
                    for (k, x) in c.iter().enumerate() {
                        acc = field.sub(&acc, &field.mul(x, cx.boundary.get(i, cx.edge_offsets[0] + k)));
                    }
                    acc
                })
                .collect();
            let neg: Vec<Scalar> = pb.iter().map(|x| field.neg(x)).collect();
            let mut rhs = vec![field.zero(); rows0];
            for (v, w) in [(0, pb), (1, &neg)] {
                match cx.vertex_spaces[v].coordinates(field, w) {
                    Some(cv) => {
                        for (j, x) in cv.into_iter().enumerate() {
                            rhs[cx.vertex_offsets[v] + j] = x;
                        }
                    }
                    None => return false,
                }
            }
            lhs == rhs
        });
    let twist_trivial = field.characteristic() == 2;
    let passed = counts_match
        && vertices_distinct
        && ball_closed
        && facets_are_translates
        && reverser_swaps_base_edge
        && reverser_normalizes
        && reverser_preserves_edge_space
        && reverser_square_scalar
        && boundary_equivariant;
    OrbitReport {
        vertex_count: nv,
        edge_count: ball.edges.len(),
        counts_match,
        vertices_distinct,
        ball_closed,
        facets_are_translates,
        reverser_swaps_base_edge,
        reverser_normalizes,
        reverser_preserves_edge_space,
        reverser_square_scalar,
        boundary_equivariant,
        twist_trivial,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_counts() {
        assert_eq!(build_ball(0, 2).unwrap().vertices.len(), 1);
        let b = build_ball(1, 2).unwrap();
        assert_eq!((b.vertices.len(), b.edges.len()), (4, 3));
        let b = build_ball(2, 2).unwrap();
        assert_eq!((b.vertices.len(), b.edges.len()), (10, 9));
        assert_eq!(build_ball(2, 3).unwrap().vertices.len(), expected_vertex_count(3, 2));
        assert!(build_ball(5, 2).is_err());
    }

    #[test]
    fn radius_one_f2() {
        let chi = PrincipalSeriesChar::trivial(&Field::Prime(2), 2, 2);
        let cx = boundary_and_augmentation(&build_ball(1, 2).unwrap(), &chi, 3).unwrap();
        assert_eq!((cx.boundary.rows(), cx.boundary.cols()), (12, 6));
        assert_eq!(cx.edge_spaces[0].dim(), 2);
        assert!(cx.vertex_spaces.iter().all(|s| s.dim() == 3));
        let r = exactness_report(&cx);
        assert!(r.passed, "{r:?}");
        let last = r.radii.last().unwrap();
        assert_eq!((last.rank_boundary, last.kernel_augmentation), (6, 6));
        let o = orbit_decomposition_check(&cx);
        assert!(o.passed && o.twist_trivial, "{o:?}");
    }

    #[test]
    fn radius_two_q3_char_p() {
        let chi = PrincipalSeriesChar::trivial(&Field::Prime(3), 2, 3);
        let cx = boundary_and_augmentation(&build_ball(2, 3).unwrap(), &chi, 4).unwrap();
        let r = exactness_report(&cx);
        assert!(r.passed, "{r:?}");
        let o = orbit_decomposition_check(&cx);
        assert!(o.passed && !o.twist_trivial, "{o:?}");
    }
}

#[cfg(test)]
mod matrix_tests {
    use super::*;

    #[test]
    fn full_matrix_timing() {
        let cases: Vec<(u32, usize, Field, &str)> = vec![
            (2, 3, Field::Prime(2), ""),
            (2, 3, Field::Prime(3), "z=[2,1]"),
            (2, 3, Field::Rational, "z=[2,3]"),
            (3, 2, Field::Prime(3), ""),
            (3, 2, Field::Prime(5), "z=[2,3];tame=[1,0]"),
            (3, 2, Field::Rational, "z=[1/2,3];tame=[0,1]"),
        ];
        for (q, r, field, spec) in cases {
            let t = std::time::Instant::now();
            let chi = PrincipalSeriesChar::parse(spec, &field, 2, q).unwrap();
            let cx = boundary_and_augmentation(&build_ball(r, q).unwrap(), &chi, r + 2).unwrap();
            let rep = exactness_report(&cx);
            let o = orbit_decomposition_check(&cx);
            eprintln!("q={q} r={r} {field:?} {spec}: {:?} {:?}", rep.radii.iter().map(|x| (x.rank_boundary, x.kernel_augmentation, x.rank_augmentation)).collect::<Vec<_>>(), t.elapsed());
            assert!(rep.passed && o.passed, "{rep:?} {o:?}");
        }
    }
}
