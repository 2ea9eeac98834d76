use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::homology::{SupportSampler, SupportSpace};
use crate::arith::{span_rank, Matrix, Rat};
use crate::curves::{canonical, geometric_count, CurveModel, CurvePoint};
use crate::error::Result;

/// `(hp0, hp1)` of one open set in the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvPiece {
    pub name: String,
    pub punctures: usize,
    pub hp0: usize,
    pub hp1: usize,
}

/// Exactness data at one node of the six-term sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvNode {
    pub name: String,
    pub dim: usize,
    pub image_in: usize,
    pub kernel_out: usize,
    pub composition_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub support_size: usize,
    pub pieces: Vec<MvPiece>,
    pub sequence: Vec<usize>,
    pub map_ranks: Vec<usize>,
    pub nodes: Vec<MvNode>,
    pub alternating_sum: i64,
    pub pass: bool,
    pub failure: Option<String>,
}

/// A subquotient `span(gens) + sub / sub` of an ambient `Q^n`.
struct Sub {
    n: usize,
    gens: Vec<Vec<Rat>>,
    sub: Vec<Vec<Rat>>,
}

impl Sub {
    fn dim(&self) -> usize {
        rank_mod(&self.gens, &self.sub, self.n)
    }
}

fn rank_mod(vs: &[Vec<Rat>], sub: &[Vec<Rat>], n: usize) -> usize {
    let all: Vec<Vec<Rat>> = vs.iter().chain(sub).cloned().collect();
    span_rank(&all, n) - span_rank(sub, n)
}

fn concat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().chain(b).cloned().collect()
}

fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x.clone()).collect()
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn units(n: usize) -> Vec<Vec<Rat>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
}

/// Combination `Σ c_i v_i` of ambient vectors.
fn combine(vs: &[Vec<Rat>], c: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (v, ci) in vs.iter().zip(c) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += ci * x;
        }
    }
    out
}

struct Piece {
    v: Vec<Vec<Rat>>,
    h1: Vec<Vec<Rat>>,
    res: Vec<Vec<Rat>>,
}

fn piece(space: &SupportSpace, punct: &BTreeSet<CurvePoint>) -> Result<Piece> {
    let n = space.dim();
    let v = space.admissible(punct)?;
    let res: Vec<Vec<Rat>> = v.iter().map(|b| space.residues(b)).collect();
    let t = space.support_size();
    let h1 = if v.is_empty() {
        Vec::new()
    } else {
        Matrix::from_cols(res.clone(), t).kernel().iter().map(|c| combine(&v, c, n)).collect()
    };
    Ok(Piece { v, h1, res })
}

/// Verifies exactness of the Mayer–Vietoris sequence for
/// `U1 = Z − S1`, `U2 = Z − S2`, `U1 ∩ U2` and `X = Z − (S1 ∩ S2)` on one
/// common finite support.
pub fn mv_check(curve: &CurveModel, s1: &[CurvePoint], s2: &[CurvePoint], seed: u64) -> Result<MvReport> {
    let a: BTreeSet<CurvePoint> = s1.iter().map(|p| canonical(curve, p)).collect::<Result<_>>()?;
    let b: BTreeSet<CurvePoint> = s2.iter().map(|p| canonical(curve, p)).collect::<Result<_>>()?;
    let union: BTreeSet<CurvePoint> = a.union(&b).cloned().collect();
    let inter: BTreeSet<CurvePoint> = a.intersection(&b).cloned().collect();
    let target = 2 * curve.genus() + geometric_count(&union) + 4;
    let mut t = BTreeSet::new();
    if !union.contains(&CurvePoint::Infinity) {
        t.insert(CurvePoint::Infinity);
    }
    let mut sampler = SupportSampler::new(curve, seed, &union);
    while geometric_count(&t) < target {
        t.insert(sampler.next_point()?);
    }
    let space = SupportSpace::new(curve, &t)?;
    let n = space.dim();
    let m = space.support_size();

    let u1 = piece(&space, &a)?;
    let u2 = piece(&space, &b)?;
    let u12 = piece(&space, &union)?;
    let x = piece(&space, &inter)?;

    let zero_n = vec![Rat::zero(); n];
    let zero_m = vec![Rat::zero(); m];
    let h1_u12 = Sub { n, gens: u12.h1.clone(), sub: vec![] };
    let h1_sum = Sub {
        n: 2 * n,
        gens: u1.h1.iter().map(|v| concat(v, &zero_n)).chain(u2.h1.iter().map(|v| concat(&zero_n, v))).collect(),
        sub: vec![],
    };
    let h1_x = Sub { n, gens: x.h1.clone(), sub: vec![] };
    let h0_u12 = Sub { n: m, gens: units(m), sub: u12.res.clone() };
    let h0_sum = Sub {
        n: 2 * m,
        gens: units(2 * m),
        sub: u1.res.iter().map(|v| concat(v, &zero_m)).chain(u2.res.iter().map(|v| concat(&zero_m, v))).collect(),
    };
    let h0_x = Sub { n: m, gens: units(m), sub: x.res.clone() };

    let i1 = |v: &[Rat]| concat(v, &neg(v));
    let sigma1 = |v: &[Rat]| add(&v[..n], &v[n..]);
    let i0 = |v: &[Rat]| concat(v, &neg(v));
    let sigma0 = |v: &[Rat]| add(&v[..m], &v[m..]);
    // δ lifts z = a + b with a ∈ V(U1), b ∈ V(U2) and takes the residues of a.
    let lift_cols: Vec<Vec<Rat>> = u1.v.iter().chain(&u2.v).cloned().collect();
    let lift = if lift_cols.is_empty() { None } else { Some(Matrix::from_cols(lift_cols.clone(), n)) };
    let delta = |z: &[Rat]| -> Option<Vec<Rat>> {
        if z.iter().all(|c| c.is_zero()) {
            return Some(zero_m.clone());
        }
        let c = lift.as_ref()?.solve(z)?;
        let k = u1.v.len();
        let av = combine(&u1.v, &c[..k], n);
        Some(space.residues(&av))
    };

    let mut failure: Option<String> = None;
    let image = |gens: &[Vec<Rat>], f: &dyn Fn(&[Rat]) -> Vec<Rat>| gens.iter().map(|g| f(g)).collect::<Vec<_>>();
    let img_i1 = image(&h1_u12.gens, &i1);
    let img_s1 = image(&h1_sum.gens, &sigma1);
    let mut img_d = Vec::new();
    for z in &h1_x.gens {
        match delta(z) {
            Some(r) => img_d.push(r),
            None => {
                failure.get_or_insert_with(|| "H1(X): connecting map could not lift a cycle".into());
            }
        }
    }
    let img_i0 = image(&h0_u12.gens, &i0);
    let img_s0 = image(&h0_sum.gens, &sigma0);

    let r_i1 = rank_mod(&img_i1, &h1_sum.sub, 2 * n);
    let r_s1 = rank_mod(&img_s1, &h1_x.sub, n);
    let r_d = rank_mod(&img_d, &h0_u12.sub, m);
    let r_i0 = rank_mod(&img_i0, &h0_sum.sub, 2 * m);
    let r_s0 = rank_mod(&img_s0, &h0_x.sub, m);

    // Compositions of consecutive maps must vanish on the subquotients.
    let c1 = rank_mod(&image(&img_i1, &sigma1), &h1_x.sub, n) == 0;
    let mut c2 = true;
    for v in &img_s1 {
        match delta(v) {
            Some(r) => c2 &= rank_mod(&[r], &h0_u12.sub, m) == 0,
            None => c2 = false,
        }
    }
    let c3 = rank_mod(&image(&img_d, &i0), &h0_sum.sub, 2 * m) == 0;
    let c4 = rank_mod(&image(&img_i0, &sigma0), &h0_x.sub, m) == 0;

    let dims = [h1_u12.dim(), h1_sum.dim(), h1_x.dim(), h0_u12.dim(), h0_sum.dim(), h0_x.dim()];
    let ins = [0, r_i1, r_s1, r_d, r_i0, r_s0];
    let outs = [r_i1, r_s1, r_d, r_i0, r_s0, 0];
    let comps = [true, c1, c2, c3, c4, true];
    let names = ["H1(U1∩U2)", "H1(U1)⊕H1(U2)", "H1(X)", "H0(U1∩U2)", "H0(U1)⊕H0(U2)", "H0(X)"];
    let mut nodes = Vec::new();
    for k in 0..6 {
        let kernel_out = dims[k] - outs[k];
        let exact = comps[k] && kernel_out == ins[k];
        if !exact {
            failure.get_or_insert_with(|| format!("{}: kernel {} vs image {}", names[k], kernel_out, ins[k]));
        }
        nodes.push(MvNode {
            name: names[k].into(),
            dim: dims[k],
            image_in: ins[k],
            kernel_out,
            composition_zero: comps[k],
            exact,
        });
    }
    let alternating_sum: i64 =
        dims.iter().enumerate().map(|(k, d)| if k % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
    if alternating_sum != 0 {
        failure.get_or_insert_with(|| format!("alternating sum {alternating_sum}"));
    }
    let mk = |name: &str, p: &Piece, punct: usize| MvPiece {
        name: name.into(),
        punctures: punct,
        hp0: m - rank_mod(&p.res, &[], m),
        hp1: p.h1.len(),
    };
    let pieces = vec![
        mk("U1", &u1, geometric_count(&a)),
        mk("U2", &u2, geometric_count(&b)),
        mk("U1∩U2", &u12, geometric_count(&union)),
        mk("X", &x, geometric_count(&inter)),
    ];
    Ok(MvReport {
        support_size: m,
        pieces,
        sequence: dims.to_vec(),
        map_ranks: vec![r_i1, r_s1, r_d, r_i0, r_s0],
        nodes,
        alternating_sum,
        pass: failure.is_none(),
        failure,
    })
}
