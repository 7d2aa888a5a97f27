//! Dual graph of the special fibre of a semistable model, with Frobenius.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use prym_algebra::ff::{Gf, GfElem};
use serde_json::{json, Value};

use super::cluster::ClusterPicture;
use crate::error::{CoreError, Result};

/// A component: a principal (or top) cluster, and for übereven clusters
/// one of its two sheets, labelled by a square root in `F_{p^{2m}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub cluster: usize,
    pub sheet: Option<GfElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    Odd(usize),
    Even(usize, GfElem),
    Twin(usize),
}

/// A chain of rational curves of the given length between two vertices.
#[derive(Clone, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub length: BigRational,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug)]
pub struct DualGraphData {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Frobenius image of each vertex.
    pub frob_vertices: Vec<usize>,
    /// Frobenius image of each edge with orientation sign.
    pub frob_edges: Vec<(usize, i32)>,
}

impl DualGraphData {
    pub fn summary(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| json!({"from": e.from, "to": e.to, "length": e.length.to_string(), "frobenius": self.frob_edges[i]}))
            .collect();
        json!({ "vertices": self.vertices.len(), "edges": edges, "frobenius_vertices": self.frob_vertices })
    }
}

/// Residue data of the picture: normalised residues of root differences
/// in `F_{p^m}`, mapped into `F_{p^{2m}}` where square roots exist.
struct Sheets<'a> {
    cp: &'a ClusterPicture,
    big: Gf,
    embed_gen: GfElem,
    e: u64,
}

impl<'a> Sheets<'a> {
    fn new(cp: &'a ClusterPicture) -> Result<Self> {
        let (big, embed_gen) = cp.roots.field.residue_field().extend(2)?;
        Ok(Sheets { cp, big, embed_gen, e: cp.roots.field.ramification_index() as u64 })
    }

    fn embed(&self, a: &GfElem) -> GfElem {
        let mut acc = self.big.zero();
        let mut pw = self.big.one();
        for &c in a.coeffs() {
            acc = self.big.add(&acc, &self.big.scalar(c, &pw));
            pw = self.big.mul(&pw, &self.embed_gen);
        }
        acc
    }

    /// `(v_π, residue of x/π^v)` for `x = r_i - r_j` in scaled coordinates.
    fn diff(&self, i: usize, j: usize) -> (u64, GfElem) {
        let l = &self.cp.roots.field;
        let d = l.sub(&self.cp.roots.roots[i], &self.cp.roots.roots[j]);
        let v = l.valuation(&d).expect("distinct roots are separated");
        (v, self.embed(&l.residue(&l.div_pi_pow(&d, v))))
    }

    /// Normalised `c * prod_{r not in s} (z_s - r)`: its `v_π` (up to a
    /// multiple of `e` coming from the scaling) and its residue.
    fn w(&self, s: usize) -> (i64, GfElem) {
        let cp = self.cp;
        let c = &cp.clusters[s];
        let z = c.centre();
        let p = cp.p;
        let lead = &cp.leading;
        let unit = lead / BigRational::from_integer(BigInt::from(p)).pow(cp.leading_valuation as i32);
        let k = self.big.div(&self.big.from_bigint(unit.numer()), &self.big.from_bigint(unit.denom())).expect("unit");
        let mut val = self.e as i64 * cp.leading_valuation;
        let mut res = k;
        let mut outside = 0i64;
        for r in 0..cp.root_count() {
            if c.contains(r) {
                continue;
            }
            let (v, u) = self.diff(z, r);
            val += v as i64;
            res = self.big.mul(&res, &u);
            outside += 1;
        }
        // Undo the p^shift scaling of each factor.
        val -= self.e as i64 * cp.roots.shift as i64 * outside;
        (val, res)
    }

    /// A square root of the residue of `w_s`, or an error when `w_s` has
    /// odd valuation.
    fn theta(&self, s: usize) -> Result<GfElem> {
        let (v, u) = self.w(s);
        if v.is_odd() {
            return Err(CoreError::Undeterminable(format!(
                "cluster {} at p = {} has odd normalising valuation; sheets are not defined",
                s, self.cp.p
            )));
        }
        self.big.sqrt(&u).ok_or_else(|| CoreError::Undeterminable("residue has no square root in the quadratic extension".into()))
    }

    /// `prod_{c child of s, c != child} (z_child - z_c)^{|c|/2}`, residue only.
    fn p_bar(&self, s: usize, child: usize) -> GfElem {
        let cp = self.cp;
        let z = cp.clusters[child].centre();
        let mut acc = self.big.one();
        for &c in cp.children(s) {
            if c == child {
                continue;
            }
            let (_, u) = self.diff(z, cp.clusters[c].centre());
            acc = self.big.mul(&acc, &self.big.pow_u64(&u, cp.clusters[c].size() as u64 / 2));
        }
        acc
    }
}

struct Builder<'a> {
    cp: &'a ClusterPicture,
    sheets: Sheets<'a>,
    thetas: Vec<Option<GfElem>>,
    vertices: Vec<Vertex>,
}

impl Builder<'_> {
    fn has_vertex(&self, s: usize) -> bool {
        s == 0 || self.cp.clusters[s].size() >= 3
    }

    fn vertex(&self, s: usize, sheet: Option<&GfElem>) -> Result<usize> {
        let want = if self.cp.is_ubereven(s) { sheet.cloned() } else { None };
        self.vertices
            .iter()
            .position(|v| v.cluster == s && v.sheet == want)
            .ok_or_else(|| CoreError::Undeterminable(format!("sheet labels of cluster {s} are inconsistent")))
    }

    /// Vertex of the parent of `child` that the branch `theta` (a square
    /// root of the residue of `w_child`) lands on.
    fn outer(&self, child: usize, theta: &GfElem) -> Result<usize> {
        let s = self.cp.clusters[child].parent.expect("child has a parent");
        if !self.cp.is_ubereven(s) {
            return self.vertex(s, None);
        }
        let big = &self.sheets.big;
        let pb = self.sheets.p_bar(s, child);
        let sheet = big.div(theta, &pb).expect("nonzero");
        let ts = self.thetas[s].as_ref().expect("übereven clusters have sheets");
        if &sheet != ts && sheet != big.neg(ts) {
            return Err(CoreError::Undeterminable(format!("sheet of cluster {child} does not match its parent")));
        }
        self.vertex(s, Some(&sheet))
    }
}

pub fn dual_graph(cp: &ClusterPicture) -> Result<DualGraphData> {
    let sheets = Sheets::new(cp)?;
    let n = cp.clusters.len();
    let mut thetas = vec![None; n];
    for s in 0..n {
        let c = &cp.clusters[s];
        if c.size() >= 2 && c.is_even() {
            thetas[s] = Some(sheets.theta(s)?);
        }
    }
    let mut b = Builder { cp, sheets, thetas, vertices: Vec::new() };
    for s in 0..n {
        if !b.has_vertex(s) {
            continue;
        }
        if cp.is_ubereven(s) {
            let t = b.thetas[s].clone().unwrap();
            let nt = b.sheets.big.neg(&t);
            b.vertices.push(Vertex { cluster: s, sheet: Some(t) });
            b.vertices.push(Vertex { cluster: s, sheet: Some(nt) });
        } else {
            b.vertices.push(Vertex { cluster: s, sheet: None });
        }
    }
    let two = BigRational::from_integer(2.into());
    let mut edges = Vec::new();
    for s in 0..n {
        if !b.has_vertex(s) {
            continue;
        }
        for &ch in cp.children(s) {
            let size = cp.clusters[ch].size();
            if size == 1 {
                continue;
            }
            let delta = cp.relative_depth(ch);
            if size == 2 {
                let t = b.thetas[ch].clone().unwrap();
                let nt = b.sheets.big.neg(&t);
                edges.push(Edge { from: b.outer(ch, &t)?, to: b.outer(ch, &nt)?, length: &delta * &two, label: EdgeLabel::Twin(ch) });
            } else if size % 2 == 1 {
                edges.push(Edge { from: b.vertex(ch, None)?, to: b.vertex(s, None)?, length: &delta / &two, label: EdgeLabel::Odd(ch) });
            } else {
                let t = b.thetas[ch].clone().unwrap();
                for th in [t.clone(), b.sheets.big.neg(&t)] {
                    edges.push(Edge {
                        from: b.vertex(ch, Some(&th))?,
                        to: b.outer(ch, &th)?,
                        length: delta.clone(),
                        label: EdgeLabel::Even(ch, th),
                    });
                }
            }
        }
    }
    let big = &b.sheets.big;
    let frob_cluster = |s: usize| {
        cp.permute_cluster(&cp.frobenius, s)
            .ok_or_else(|| CoreError::Undeterminable("Frobenius does not preserve the clusters".into()))
    };
    let mut frob_vertices = Vec::new();
    for v in &b.vertices {
        let s2 = frob_cluster(v.cluster)?;
        let sheet = v.sheet.as_ref().map(|t| big.frobenius(t));
        frob_vertices.push(b.vertex(s2, sheet.as_ref())?);
    }
    let mut frob_edges = Vec::new();
    for e in &edges {
        let (label, sign) = match &e.label {
            EdgeLabel::Odd(ch) => (EdgeLabel::Odd(frob_cluster(*ch)?), 1),
            EdgeLabel::Even(ch, th) => (EdgeLabel::Even(frob_cluster(*ch)?, big.frobenius(th)), 1),
            EdgeLabel::Twin(ch) => {
                let ch2 = frob_cluster(*ch)?;
                let img = big.frobenius(b.thetas[*ch].as_ref().unwrap());
                let t2 = b.thetas[ch2].as_ref().unwrap();
                let sign = if &img == t2 {
                    1
                } else if img == big.neg(t2) {
                    -1
                } else {
                    return Err(CoreError::Undeterminable("twin branch labels are not Frobenius compatible".into()));
                };
                (EdgeLabel::Twin(ch2), sign)
            }
        };
        let idx = edges
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| CoreError::Undeterminable("Frobenius image of an edge is missing".into()))?;
        let (f0, f1) = if sign == 1 { (edges[idx].from, edges[idx].to) } else { (edges[idx].to, edges[idx].from) };
        if frob_vertices[e.from] != f0 || frob_vertices[e.to] != f1 {
            return Err(CoreError::Undeterminable("Frobenius action on the dual graph is inconsistent".into()));
        }
        frob_edges.push((idx, sign));
    }
    Ok(DualGraphData { vertices: b.vertices, edges, frob_vertices, frob_edges })
}
