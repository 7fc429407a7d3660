//! Finite planar configurations: lattice patches, Delaunay triangulations,
//! optimal neutral charge assignments and midpoint-centered energies.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use robust::{incircle, orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::energy::Potential;
use crate::error::{Error, Result};
use crate::lattice::LatticeParam;

/// Largest configuration accepted by the exhaustive charge search.
pub const MAX_EXHAUSTIVE: usize = 16;

/// Relative tolerance on the incircle determinant for cocircular quads.
pub const COCIRCULAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    Hexagonal,
    Square,
}

impl FromStr for PatchKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hexagonal" | "hex" => Ok(PatchKind::Hexagonal),
            "square" => Ok(PatchKind::Square),
            _ => Err(Error::InvalidInput(format!("unknown patch kind {s:?}"))),
        }
    }
}

impl PatchKind {
    pub fn lattice(self) -> LatticeParam {
        match self {
            PatchKind::Hexagonal => LatticeParam::hexagonal(),
            PatchKind::Square => LatticeParam::square(),
        }
    }
}

/// Patch provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchInfo {
    pub kind: PatchKind,
    pub radius: f64,
}

/// Planar points with optional `+-1` charges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charges: Option<Vec<i8>>,
    /// Factor applied to coordinates to reach unit density.
    #[serde(default = "one")]
    pub density_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<PatchInfo>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    x: f64,
    y: f64,
    #[serde(default)]
    charge: Option<i8>,
}

impl PointConfig {
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        PointConfig {
            points,
            charges: None,
            density_scale: 1.0,
            patch: None,
        }
    }

    pub fn with_charges(mut self, charges: Vec<i8>) -> Result<Self> {
        validate_charges(self.points.len(), &charges)?;
        self.charges = Some(charges);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks charge length, values and neutrality.
    pub fn validate(&self) -> Result<()> {
        if self.points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("coordinates must be finite".into()));
        }
        match &self.charges {
            Some(c) => validate_charges(self.points.len(), c),
            None => Ok(()),
        }
    }

    /// CSV with header `x,y,charge`; the charge column is left empty when absent.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (i, p) in self.points.iter().enumerate() {
            let charge = self.charges.as_ref().map(|c| c[i]);
            w.serialize(CsvRow { x: p[0], y: p[1], charge })
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Reads `x,y[,charge]` with a mandatory header row; `#` lines are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        let mut charges = Vec::new();
        for row in r.deserialize::<CsvRow>() {
            let row = row.map_err(|e| Error::InvalidInput(format!("bad CSV row: {e}")))?;
            points.push([row.x, row.y]);
            charges.push(row.charge);
        }
        let mut cfg = PointConfig::new(points);
        if charges.iter().all(Option::is_some) && !charges.is_empty() {
            cfg.charges = Some(charges.into_iter().flatten().collect());
        } else if charges.iter().any(Option::is_some) {
            return Err(Error::InvalidInput("charge column only partially filled".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PointConfig = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn validate_charges(n: usize, charges: &[i8]) -> Result<()> {
    if charges.len() != n {
        return Err(Error::InvalidInput(format!("{} charges for {n} points", charges.len())));
    }
    if charges.iter().any(|c| *c != 1 && *c != -1) {
        return Err(Error::InvalidInput("charges must be +1 or -1".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddCount(n));
    }
    if charges.iter().map(|&c| c as i64).sum::<i64>() != 0 {
        return Err(Error::InvalidInput("charges must sum to zero".into()));
    }
    Ok(())
}

/// Unit-density lattice points inside the closed disc of radius `r`.
pub fn make_patch(kind: PatchKind, radius: f64) -> Result<PointConfig> {
    crate::error::ensure_positive("R", radius)?;
    let [v1, v2] = kind.lattice().basis();
    let n = (2.0 * radius).ceil() as i64 + 2;
    let r2 = radius * radius * (1.0 + 1e-12);
    let mut points = Vec::new();
    for l in -n..=n {
        for k in -n..=n {
            let p = [k as f64 * v1[0] + l as f64 * v2[0], k as f64 * v1[1] + l as f64 * v2[1]];
            if p[0] * p[0] + p[1] * p[1] <= r2 {
                points.push(p);
            }
        }
    }
    let mut cfg = PointConfig::new(points);
    cfg.patch = Some(PatchInfo { kind, radius });
    Ok(cfg)
}

/// Delaunay triangulation with the midpoint set used for centered energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    /// Counter-clockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Sorted `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
    /// Edge midpoints plus the opposite-diagonal midpoints of cocircular quads, deduplicated.
    pub midpoints: Vec<[f64; 2]>,
}

fn coord(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm2(a: [f64; 2]) -> f64 {
    a[0] * a[0] + a[1] * a[1]
}

/// Bowyer-Watson insertion with exact orientation and incircle predicates.
pub fn delaunay(points: &[[f64; 2]]) -> Result<Triangulation> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("coordinates must be finite".into()));
    }
    let p0 = points[0];
    let far = points.iter().map(|p| norm2(sub(*p, p0))).fold(0.0, f64::max);
    let q = points.iter().find(|p| **p != p0).copied();
    let collinear = q.is_none_or(|q| points.iter().all(|p| orient2d(coord(p0), coord(q), coord(*p)) == 0.0));
    if collinear {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300) * 1e4;
    let n = points.len();
    let mut verts: Vec<[f64; 2]> = points.to_vec();
    verts.push([c[0] - 2.0 * span, c[1] - span]);
    verts.push([c[0] + 2.0 * span, c[1] - span]);
    verts.push([c[0], c[1] + 2.0 * span]);

    let mut tris: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            continue;
        }
        let pc = coord(*p);
        let (bad, keep): (Vec<[usize; 3]>, Vec<[usize; 3]>) = tris
            .into_iter()
            .partition(|t| incircle(coord(verts[t[0]]), coord(verts[t[1]]), coord(verts[t[2]]), pc) > 0.0);
        tris = keep;
        let mut boundary: Vec<(usize, usize)> = Vec::new();
        for t in &bad {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let shared = bad.iter().any(|u| {
                    u != t && [(u[0], u[1]), (u[1], u[2]), (u[2], u[0])].contains(&(e.1, e.0))
                });
                if !shared {
                    boundary.push(e);
                }
            }
        }
        for (a, b) in boundary {
            tris.push([a, b, i]);
        }
    }
    tris.retain(|t| t.iter().all(|&v| v < n));
    tris.sort_unstable();

    let mut edges: Vec<(usize, usize)> = tris
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    edges.sort_unstable();
    edges.dedup();

    let mid = |a: usize, b: usize| [(points[a][0] + points[b][0]) / 2.0, (points[a][1] + points[b][1]) / 2.0];
    let mut mids: Vec<[f64; 2]> = edges.iter().map(|&(a, b)| mid(a, b)).collect();

    // Opposite diagonals of cocircular quads: the other valid triangulation's edge.
    for (ti, t) in tris.iter().enumerate() {
        for (a, b, cidx) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])] {
            for u in &tris[ti + 1..] {
                for (ua, ub, d) in [(u[0], u[1], u[2]), (u[1], u[2], u[0]), (u[2], u[0], u[1])] {
                    if ua == b && ub == a {
                        let scale = [a, b, cidx, d]
                            .iter()
                            .map(|&v| norm2(sub(points[v], points[a])))
                            .fold(0.0, f64::max);
                        let det = incircle(coord(points[a]), coord(points[b]), coord(points[cidx]), coord(points[d]));
                        if det.abs() <= COCIRCULAR_TOL * scale * scale {
                            mids.push(mid(cidx, d));
                        }
                    }
                }
            }
        }
    }

    let tol = 1e-9 * far.sqrt().max(1.0);
    mids.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    let mut midpoints: Vec<[f64; 2]> = Vec::with_capacity(mids.len());
    for m in mids {
        if !midpoints.iter().rev().take(16).any(|q| norm2(sub(*q, m)).sqrt() <= tol) {
            midpoints.push(m);
        }
    }
    Ok(Triangulation {
        triangles: tris,
        edges,
        midpoints,
    })
}

/// Triangles whose circumcircle strictly contains another point beyond the
/// relative tolerance.
pub fn empty_circle_violations(points: &[[f64; 2]], tri: &Triangulation, tol: f64) -> usize {
    tri.triangles
        .par_iter()
        .filter(|t| {
            let [a, b, c] = [points[t[0]], points[t[1]], points[t[2]]];
            let scale = norm2(sub(b, a)).max(norm2(sub(c, a)));
            points.iter().enumerate().any(|(i, p)| {
                !t.contains(&i) && incircle(coord(a), coord(b), coord(c), coord(*p)) > tol * scale * scale.max(norm2(sub(*p, a)))
            })
        })
        .count()
}

/// How the charge assignment is searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "method")]
pub enum ChargeMethod {
    Exhaustive,
    Anneal { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeResult {
    /// `(1/N) sum_{i != j} phi_i phi_j f(|x_i - x_j|^2)`.
    pub energy_per_point: f64,
    /// Normalised so that the first point carries `+1`.
    pub charges: Vec<i8>,
}

fn interaction(points: &[[f64; 2]], f: &Potential) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = norm2(sub(points[i], points[j]));
            if r == 0.0 {
                return Err(Error::DegenerateInput(format!("points {i} and {j} coincide")));
            }
            let v = f.eval(r);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}

fn total(m: &[Vec<f64>], phi: &[i8]) -> f64 {
    let mut s = 0.0;
    for i in 0..phi.len() {
        for j in 0..phi.len() {
            s += (phi[i] * phi[j]) as f64 * m[i][j];
        }
    }
    s
}

fn canonical(mut phi: Vec<i8>) -> Vec<i8> {
    if phi.first() == Some(&-1) {
        phi.iter_mut().for_each(|c| *c = -*c);
    }
    phi
}

/// Minimal neutral `+-1` assignment for the pair energy.
pub fn charge_energy(x: &PointConfig, f: &Potential, method: ChargeMethod) -> Result<ChargeResult> {
    let n = x.len();
    if n % 2 == 1 {
        return Err(Error::OddCount(n));
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty configuration".into()));
    }
    let m = interaction(&x.points, f)?;
    let phi = match method {
        ChargeMethod::Exhaustive => exhaustive(&m)?,
        ChargeMethod::Anneal { seed } => anneal(&m, seed),
    };
    Ok(ChargeResult {
        energy_per_point: total(&m, &phi) / n as f64,
        charges: canonical(phi),
    })
}

fn exhaustive(m: &[Vec<f64>]) -> Result<Vec<i8>> {
    let n = m.len();
    if n > MAX_EXHAUSTIVE {
        return Err(Error::TooLargeForExhaustive { n, max: MAX_EXHAUSTIVE });
    }
    let decode = |mask: u32| -> Vec<i8> { (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect() };
    // Point 0 is fixed to +1; the global flip gives the same energy.
    let best = (0u32..1 << n)
        .into_par_iter()
        .filter(|mask| mask & 1 == 1 && mask.count_ones() as usize == n / 2)
        .map(|mask| (total(m, &decode(mask)), mask))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .ok_or_else(|| Error::InvalidInput("no neutral assignment".into()))?;
    Ok(decode(best.1))
}

/// Simulated annealing over neutrality-preserving exchanges (random pairs and
/// nearest opposite neighbours), geometric cooling, then greedy polishing.
fn anneal(m: &[Vec<f64>], seed: u64) -> Vec<i8> {
    let n = m.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phi: Vec<i8> = (0..n).map(|i| if i < n / 2 { 1 } else { -1 }).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        phi.swap(i, j);
    }
    let mut field: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| phi[k] as f64 * m[i][k]).sum())
        .collect();
    // Change of the full double sum when the opposite charges at i and j are exchanged.
    let delta = |phi: &[i8], field: &[f64], i: usize, j: usize| {
        let (pi, pj) = (phi[i] as f64, phi[j] as f64);
        -4.0 * (pi * (field[i] - pj * m[i][j]) + pj * (field[j] - pi * m[i][j]))
    };
    let apply = |phi: &mut Vec<i8>, field: &mut Vec<f64>, i: usize, j: usize| {
        let (pi, pj) = (phi[i] as f64, phi[j] as f64);
        for k in 0..n {
            field[k] -= 2.0 * (pi * m[k][i] + pj * m[k][j]);
        }
        phi[i] = -phi[i];
        phi[j] = -phi[j];
    };
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let steps = 4000 * n;
    let (t0, t1) = (2.0 * scale, 1e-4 * scale);
    let cool = (t1 / t0).powf(1.0 / steps as f64);
    let mut temp = t0;
    let mut best = (total(m, &phi), phi.clone());
    let mut current = best.0;
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let j = if rng.random_bool(0.5) {
            (0..n)
                .filter(|&k| phi[k] != phi[i])
                .max_by(|&a, &b| m[i][a].total_cmp(&m[i][b]))
                .unwrap_or(i)
        } else {
            rng.random_range(0..n)
        };
        if phi[i] == phi[j] {
            temp *= cool;
            continue;
        }
        let d = delta(&phi, &field, i, j);
        if d <= 0.0 || rng.random::<f64>() < (-d / temp).exp() {
            apply(&mut phi, &mut field, i, j);
            current += d;
            if current < best.0 {
                best = (current, phi.clone());
            }
        }
        temp *= cool;
    }
    let mut phi = best.1;
    let mut field: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| phi[k] as f64 * m[i][k]).sum())
        .collect();
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in i + 1..n {
                if phi[i] != phi[j] && delta(&phi, &field, i, j) < -1e-14 * scale {
                    apply(&mut phi, &mut field, i, j);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    phi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterEnergy {
    pub value: f64,
    pub midpoint: [f64; 2],
}

/// `sum_x f(|x - m|^2)` at one location.
pub fn center_energy_at(x: &PointConfig, f: &Potential, m: [f64; 2]) -> Result<f64> {
    let mut acc = crate::series::KahanSum::new();
    for p in &x.points {
        let r = norm2(sub(*p, m));
        if r == 0.0 {
            return Err(Error::DegenerateInput("midpoint coincides with a point".into()));
        }
        acc.add(f.eval(r));
    }
    Ok(acc.value())
}

/// Minimum of [`center_energy_at`] over the Delaunay midpoint set.
pub fn center_energy(x: &PointConfig, f: &Potential) -> Result<CenterEnergy> {
    let tri = delaunay(&x.points)?;
    let mut best: Option<CenterEnergy> = None;
    for m in tri.midpoints {
        let value = center_energy_at(x, f, m)?;
        if best.is_none_or(|b| value < b.value) {
            best = Some(CenterEnergy { value, midpoint: m });
        }
    }
    best.ok_or_else(|| Error::DegenerateInput("no midpoints".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Potential {
        Potential::Gaussian { t: 1.0 }
    }

    #[test]
    fn unit_square_has_both_diagonal_midpoints() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let t = delaunay(&pts).unwrap();
        assert_eq!(t.triangles.len(), 2);
        assert_eq!(t.edges.len(), 5);
        let centre = t.midpoints.iter().filter(|m| (m[0] - 0.5).abs() < 1e-12 && (m[1] - 0.5).abs() < 1e-12);
        assert_eq!(centre.count(), 1);
        assert_eq!(t.midpoints.len(), 5);
    }

    #[test]
    fn collinear_points_are_rejected() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]];
        assert!(matches!(delaunay(&pts), Err(Error::DegenerateInput(_))));
        assert!(delaunay(&pts[..2]).is_err());
    }

    #[test]
    fn three_points_give_three_midpoints() {
        let pts = [[0.0, 0.0], [2.0, 0.0], [0.3, 1.7]];
        let cfg = PointConfig::new(pts.to_vec());
        let t = delaunay(&pts).unwrap();
        assert_eq!(t.midpoints.len(), 3);
        let f = Potential::InversePower { s: 4.0 };
        let want = t
            .midpoints
            .iter()
            .map(|m| center_energy_at(&cfg, &f, *m).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(center_energy(&cfg, &f).unwrap().value, want);
    }

    #[test]
    fn hexagonal_patch_is_equilateral() {
        // hexagon-shaped region so that the convex hull is made of lattice edges
        let [v1, v2] = LatticeParam::hexagonal().basis();
        let mut pts = Vec::new();
        for k in -4i64..=4 {
            for l in -4i64..=4 {
                if (k + l).abs() <= 4 {
                    pts.push([k as f64 * v1[0] + l as f64 * v2[0], k as f64 * v1[1] + l as f64 * v2[1]]);
                }
            }
        }
        let p = PointConfig::new(pts);
        let t = delaunay(&p.points).unwrap();
        assert_eq!(t.triangles.len(), 6 * 16);
        let side = 1.0 / LatticeParam::hexagonal().y.sqrt();
        for tri in &t.triangles {
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let d = norm2(sub(p.points[tri[a]], p.points[tri[b]])).sqrt();
                assert!((d - side).abs() < 1e-9, "{d}");
            }
        }
        assert_eq!(empty_circle_violations(&p.points, &t, 1e-9), 0);
    }

    #[test]
    fn two_points_forced_assignment() {
        let cfg = PointConfig::new(vec![[0.0, 0.0], [0.0, 1.5]]);
        let r = charge_energy(&cfg, &gauss(), ChargeMethod::Exhaustive).unwrap();
        assert_eq!(r.charges, vec![1, -1]);
        assert!((r.energy_per_point + (-2.25f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn count_errors() {
        let odd = PointConfig::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(charge_energy(&odd, &gauss(), ChargeMethod::Exhaustive), Err(Error::OddCount(3))));
        let big = PointConfig::new((0..18).map(|i| [i as f64, 0.0]).collect());
        assert!(matches!(
            charge_energy(&big, &gauss(), ChargeMethod::Exhaustive),
            Err(Error::TooLargeForExhaustive { .. })
        ));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let cfg = PointConfig::new(vec![[0.0, 0.5], [1.25, -3.0]]).with_charges(vec![1, -1]).unwrap();
        let csv = cfg.to_csv().unwrap();
        assert!(csv.starts_with("x,y,charge\n"));
        assert_eq!(PointConfig::from_csv(&csv).unwrap(), cfg);
        assert_eq!(PointConfig::from_json(&cfg.to_json().unwrap()).unwrap(), cfg);
        let bare = PointConfig::from_csv("x,y\n0,0\n1,2\n").unwrap();
        assert_eq!(bare.charges, None);
        assert!(PointConfig::from_csv("x,y,charge\n0,0,1\n1,1,1\n").is_err());
    }

    #[test]
    fn patch_counts_track_area() {
        for kind in [PatchKind::Hexagonal, PatchKind::Square] {
            for r in [3.0, 6.0, 9.0] {
                let n = make_patch(kind, r).unwrap().len() as f64;
                let area = std::f64::consts::PI * r * r;
                assert!((n - area).abs() < 2.0 * std::f64::consts::PI * r + 4.0, "{kind:?} {r} {n}");
            }
        }
    }
}
