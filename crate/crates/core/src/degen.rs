//! Certificates for the dimension of `L_(d_1..d_r)(2^n)` built from
//! degenerations of `(P^1)^r` into two copies glued along a divisor `R`.
//!
//! A certificate is a tree of claims `dim L_deg(2^n) = c`. Inner nodes apply
//! one inference rule and are checked by arithmetic on their children's
//! claims; leaves are discharged by a rank computation at recorded random
//! points, by the exception table, or by citation. The checker recomputes
//! every child system from the parent and the parameters and trusts nothing
//! the planner wrote except the leaf seeds.
//!
//! Degree tuples in claims are normalized: zero degrees dropped, sorted
//! ascending. Virtual dimensions in the bookkeeping are taken on the full
//! product before normalization.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::marker::PhantomData;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Speciality};
use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::interp::{sample_rank, system_seed, trial_seed};
use crate::model::{critical_range, LinearSystem, MultiDegree};

/// Largest number of sections for which the planner falls back to a rank
/// computation.
pub const DEFAULT_BASE_CAP: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegenerationParams {
    pub k: u32,
    pub n1: usize,
    pub n2: usize,
    pub beta: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Claim {
    pub degrees: Vec<u32>,
    pub double_points: usize,
    pub dim: i64,
}

impl Claim {
    fn system(&self) -> Result<LinearSystem> {
        LinearSystem::doubles(&self.degrees, self.double_points)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        write!(f, "dim L_({})(2^{}) = {}", d.join(","), self.double_points, self.dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Rank at recorded random points attains the expected dimension.
    BaseCase,
    /// Dimension read from the exception table.
    ExceptionLookup,
    /// `(r, n_2)`-degeneration with the system on the second component empty.
    SimpleDeg,
    /// `(1, n_2, beta)`-degeneration with both kernels empty and transversal
    /// restrictions.
    DoubleDeg,
    /// All degrees one, `r >= 6`: non-special by an external result.
    Citation,
    /// Fewer points than an independent configuration, or more than an empty one.
    Monotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// `L_(d_1..d_{r-1}, k)(2^{n_2})` on the second component.
    L2,
    /// Kernel on the first component, `L_(d_1..d_{r-1}, d_r-k-1)(2^{n_1})`.
    LHat1,
    /// Double-point part of the kernel on the second component,
    /// `L_(d_1..d_{r-1})(2^{n_2-beta})`.
    LHat2,
    /// `L_(d_1..d_{r-1})(2^{n_2})` non-special, so the restriction from the
    /// second component is complete.
    R2Hypothesis,
    /// `L_(d_1..d_r-1)(2^{n_1+beta})` non-special.
    Transversality,
    /// `L_(d_1..d_r-1)(2^{n_1})` on the first component.
    L1,
    /// Same degrees, another number of points.
    Bound,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::L2 => "l2",
            Role::LHat1 => "l_hat1",
            Role::LHat2 => "l_hat2",
            Role::R2Hypothesis => "r2_hypothesis",
            Role::Transversality => "transversality",
            Role::L1 => "l1",
            Role::Bound => "bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeafEvidence {
    pub prime: u32,
    pub seed: u64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateNode {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    pub claim: Claim,
    pub rule: Rule,
    #[serde(default)]
    pub params: Option<DegenerationParams>,
    #[serde(default)]
    pub children: Vec<CertificateNode>,
    #[serde(default)]
    pub leaf_evidence: Option<LeafEvidence>,
}

impl CertificateNode {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }

    /// Longest chain of degeneration edges (`Monotone` edges not counted).
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + usize::from(self.rule != Rule::Monotone))
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(CertificateNode::node_count).sum::<usize>()
    }

    pub fn child(&self, role: Role) -> Option<&CertificateNode> {
        self.children.iter().find(|c| c.role == Some(role))
    }

    /// Depth-first iterator over `(path, node)`.
    pub fn walk(&self) -> Vec<(String, &CertificateNode)> {
        let mut out = Vec::new();
        fn go<'a>(n: &'a CertificateNode, path: String, out: &mut Vec<(String, &'a CertificateNode)>) {
            out.push((path.clone(), n));
            for c in &n.children {
                let name = c.role.map_or("?", Role::name);
                go(c, format!("{path}/{name}"), out);
            }
        }
        go(self, "root".into(), &mut out);
        out
    }
}

/// Virtual dimensions of the four systems of a degeneration of
/// `L_deg(2^n)`. The second kernel is read on `(P^1)^{r-1}` with `beta`
/// simple points when `k = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bookkeeping {
    pub l1: i64,
    pub l2: i64,
    pub l_hat1: i64,
    pub l_hat2: i64,
}

fn head_product(degrees: &[u32]) -> i64 {
    degrees[..degrees.len() - 1].iter().map(|&d| d as i64 + 1).product()
}

pub fn virtual_bookkeeping(deg: &MultiDegree, params: &DegenerationParams) -> Bookkeeping {
    let d = deg.degrees();
    let r = d.len() as i64;
    let p = head_product(d);
    let dr = d[d.len() - 1] as i64;
    let k = params.k as i64;
    let (n1, n2, beta) = (params.n1 as i64, params.n2 as i64, params.beta as i64);
    let v = |last: i64, doubles: i64| p * (last + 1) - 1 - (r + 1) * doubles;
    let l_hat2 = if k == 1 {
        p - 1 - r * (n2 - beta) - beta
    } else {
        p * k - 1 - (r + 1) * (n2 - beta) - beta
    };
    Bookkeeping { l1: v(dr - k, n1), l2: v(k, n2), l_hat1: v(dr - k - 1, n1), l_hat2 }
}

/// `(n_2, beta)` with `prod_{i<r}(d_i + 1) = r(n_2 - beta) + beta` and
/// `0 <= beta < r`.
pub fn double_split(degrees: &[u32]) -> (usize, usize) {
    let r = degrees.len() as i64;
    let p = head_product(degrees);
    let beta = p % r;
    ((p / r + beta) as usize, beta as usize)
}

fn normalize(raw: &[u32]) -> Option<Vec<u32>> {
    let mut d: Vec<u32> = raw.iter().copied().filter(|&x| x > 0).collect();
    if d.is_empty() {
        return None;
    }
    d.sort_unstable();
    Some(d)
}

fn expected_of(degrees: &[u32], n: usize) -> Result<i64> {
    Ok(LinearSystem::doubles(degrees, n)?.expected_dimension())
}

fn raw_virtual(degrees: &[u32], n: usize) -> i64 {
    let s: i64 = degrees.iter().map(|&d| d as i64 + 1).product();
    s - 1 - (degrees.len() as i64 + 1) * n as i64
}

fn with_last(degrees: &[u32], last: i64) -> Option<Vec<u32>> {
    if last < 0 {
        return None;
    }
    let mut d = degrees.to_vec();
    *d.last_mut()? = last as u32;
    Some(d)
}

/// Base cases: shapes small enough to settle by rank.
pub fn is_base_shape(sorted: &[u32]) -> bool {
    match sorted.len() {
        1 => true,
        2 | 3 => sorted.iter().all(|&d| d <= 6),
        4 => {
            sorted.iter().all(|&d| d <= 4)
                || (sorted[0] == 1 && sorted[1] == 1 && sorted[3] <= 6)
                || sorted == [2, 2, 2, 5]
        }
        5 => sorted[..4] == [1, 1, 1, 1] && sorted[4] <= 5,
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Base,
    Simple { n2: usize },
    Double,
    AllOnes,
    Uncovered,
}

/// The case analysis of the induction, on sorted positive degrees.
fn induction_branch(d: &[u32]) -> Branch {
    let r = d.len();
    if is_base_shape(d) {
        return Branch::Base;
    }
    let p = head_product(d) as usize;
    match r {
        2 | 3 => Branch::Simple { n2: p },
        4 => match d {
            [1, 1, 1, d4] if *d4 >= 7 => Branch::Simple { n2: 8 },
            [1, 1, 4, d4] if *d4 >= 6 => Branch::Simple { n2: 20 },
            [1, 1, d3, d4] if *d3 >= 6 && *d4 >= 6 => Branch::Simple { n2: 4 * *d3 as usize + 4 },
            [2, 2, 2, d4] if *d4 >= 6 => Branch::Simple { n2: 27 },
            [1, 1, d3, _] if d3 % 2 == 0 => Branch::Uncovered,
            _ => Branch::Double,
        },
        5 => match d {
            [1, 1, 1, 1, d5] if *d5 >= 6 => Branch::Simple { n2: 16 },
            _ => Branch::Double,
        },
        _ if d.iter().all(|&x| x == 1) => Branch::AllOnes,
        _ => Branch::Double,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub seed: u64,
    pub retries: usize,
    /// Largest section count settled by rank when no degeneration applies.
    pub base_cap: u64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { seed: 0, retries: crate::DEFAULT_RETRIES, base_cap: DEFAULT_BASE_CAP }
    }
}

/// Certificate for the dimension of `L_deg(2^n)` asserted by the
/// classification, over the prime field `F`.
pub fn plan<F: PrimeField>(deg: &MultiDegree, n: usize, seed: u64) -> Result<CertificateNode> {
    plan_with::<F>(deg, n, &PlanOptions { seed, ..PlanOptions::default() })
}

pub fn plan_with<F: PrimeField>(deg: &MultiDegree, n: usize, opts: &PlanOptions) -> Result<CertificateNode> {
    if deg.degrees().contains(&0) {
        return Err(Error::NonPositiveDegree(deg.degrees().to_vec()));
    }
    let sorted = deg.sorted();
    let claim = classify(&sorted, n)?.dim;
    let mut planner = Planner::<F> { opts: *opts, memo: HashMap::new(), _field: PhantomData };
    planner
        .prove(sorted.degrees(), n, claim)
        .ok_or_else(|| Error::Unplannable(format!("{}", LinearSystem::doubles(sorted.degrees(), n).expect("valid"))))
}

/// Certificate for an arbitrary claim; `None` when no rule proves it.
pub fn plan_claim<F: PrimeField>(deg: &MultiDegree, n: usize, dim: i64, opts: &PlanOptions) -> Option<CertificateNode> {
    let d = normalize(deg.degrees())?;
    Planner::<F> { opts: *opts, memo: HashMap::new(), _field: PhantomData }.prove(&d, n, dim)
}

struct Planner<F> {
    opts: PlanOptions,
    memo: HashMap<(Vec<u32>, usize, i64), Option<CertificateNode>>,
    _field: PhantomData<F>,
}

fn leaf(claim: Claim, rule: Rule, evidence: Option<LeafEvidence>) -> CertificateNode {
    CertificateNode { role: None, claim, rule, params: None, children: Vec::new(), leaf_evidence: evidence }
}

impl<F: PrimeField> Planner<F> {
    /// `d` is normalized.
    fn prove(&mut self, d: &[u32], n: usize, dim: i64) -> Option<CertificateNode> {
        let key = (d.to_vec(), n, dim);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.prove_uncached(d, n, dim);
        self.memo.insert(key, out.clone());
        out
    }

    fn prove_uncached(&mut self, d: &[u32], n: usize, dim: i64) -> Option<CertificateNode> {
        let deg = MultiDegree::new(d.to_vec()).ok()?;
        let claim = Claim { degrees: d.to_vec(), double_points: n, dim };
        let c = classify(&deg, n).ok()?;
        if c.status == Speciality::Special {
            if c.dim != dim {
                return None;
            }
            let evidence = self.rank_evidence(d, n, Some(dim));
            return Some(leaf(claim, Rule::ExceptionLookup, evidence));
        }
        let expected = expected_of(d, n).ok()?;
        if dim != expected {
            // only non-speciality is provable
            return None;
        }
        let (lo, hi) = critical_range(&deg);
        if n < lo || n > hi {
            if let Some(node) = self.monotone(d, n, dim, lo, hi) {
                return Some(node);
            }
        }
        let attempt = match induction_branch(d) {
            Branch::Base => self.base_case(d, n, dim),
            Branch::Simple { n2 } => self.simple(d, n, dim, n2),
            Branch::Double => self.double(d, n, dim),
            Branch::AllOnes => {
                if deg.section_count() > self.opts.base_cap {
                    Some(leaf(claim.clone(), Rule::Citation, None))
                } else {
                    self.base_case(d, n, dim)
                }
            }
            Branch::Uncovered => None,
        };
        attempt
            .or_else(|| self.simple(d, n, dim, head_product(d) as usize))
            .or_else(|| self.base_case(d, n, dim))
    }

    fn rank_evidence(&self, d: &[u32], n: usize, want: Option<i64>) -> Option<LeafEvidence> {
        let spec = LinearSystem::doubles(d, n).ok()?;
        if spec.section_count() > self.opts.base_cap {
            return None;
        }
        let want = want.unwrap_or_else(|| spec.expected_dimension());
        let base = system_seed(self.opts.seed, d, n);
        (0..self.opts.retries).find_map(|t| {
            let seed = trial_seed(base, t);
            let rank = sample_rank::<F>(&spec, seed).ok()?;
            (spec.section_count() as i64 - 1 - rank as i64 == want).then_some(LeafEvidence { prime: F::MODULUS, seed, rank })
        })
    }

    fn base_case(&self, d: &[u32], n: usize, dim: i64) -> Option<CertificateNode> {
        let ev = self.rank_evidence(d, n, None)?;
        let claim = Claim { degrees: d.to_vec(), double_points: n, dim };
        Some(leaf(claim, Rule::BaseCase, Some(ev)))
    }

    fn monotone(&mut self, d: &[u32], n: usize, dim: i64, lo: usize, hi: usize) -> Option<CertificateNode> {
        let (m, child_dim) = if n < lo { (lo, raw_virtual(d, lo)) } else { (hi, -1) };
        let child = self.prove(d, m, child_dim)?;
        Some(CertificateNode {
            role: None,
            claim: Claim { degrees: d.to_vec(), double_points: n, dim },
            rule: Rule::Monotone,
            params: None,
            children: vec![with_role(child, Role::Bound)],
            leaf_evidence: None,
        })
    }

    fn child(&mut self, role: Role, raw: &[u32], n: usize, dim: i64) -> Option<CertificateNode> {
        let d = normalize(raw)?;
        Some(with_role(self.prove(&d, n, dim)?, role))
    }

    fn simple(&mut self, d: &[u32], n: usize, dim: i64, n2: usize) -> Option<CertificateNode> {
        let r = d.len();
        let k = r as u32;
        let dr = *d.last()? as i64;
        if n < n2 || dr < k as i64 + 1 {
            return None;
        }
        let n1 = n - n2;
        let l2 = with_last(d, k as i64)?;
        let l_hat1 = with_last(d, dr - k as i64 - 1)?;
        let children = vec![self.child(Role::L2, &l2, n2, -1)?, self.child(Role::LHat1, &l_hat1, n1, dim)?];
        let node = CertificateNode {
            role: None,
            claim: Claim { degrees: d.to_vec(), double_points: n, dim },
            rule: Rule::SimpleDeg,
            params: Some(DegenerationParams { k, n1, n2, beta: 0 }),
            children,
            leaf_evidence: None,
        };
        check_local(&node).is_ok().then_some(node)
    }

    fn double(&mut self, d: &[u32], n: usize, dim: i64) -> Option<CertificateNode> {
        let r = d.len();
        let dr = *d.last()? as i64;
        if r < 2 || dr < 2 {
            return None;
        }
        let (n2, beta) = double_split(d);
        if n < n2 {
            return None;
        }
        let n1 = n - n2;
        let head = &d[..r - 1];
        let l_hat1 = with_last(d, dr - 2)?;
        let l1 = with_last(d, dr - 1)?;
        let head_e = |m: usize| expected_of(head, m).ok();
        let l1_e = |m: usize| expected_of(&l1, m).ok();
        let children = vec![
            self.child(Role::LHat1, &l_hat1, n1, -1)?,
            self.child(Role::LHat2, head, n2 - beta, beta as i64 - 1)?,
            self.child(Role::R2Hypothesis, head, n2, head_e(n2)?)?,
            self.child(Role::Transversality, &l1, n1 + beta, l1_e(n1 + beta)?)?,
            self.child(Role::L1, &l1, n1, l1_e(n1)?)?,
        ];
        let node = CertificateNode {
            role: None,
            claim: Claim { degrees: d.to_vec(), double_points: n, dim },
            rule: Rule::DoubleDeg,
            params: Some(DegenerationParams { k: 1, n1, n2, beta }),
            children,
            leaf_evidence: None,
        };
        check_local(&node).is_ok().then_some(node)
    }
}

fn with_role(mut node: CertificateNode, role: Role) -> CertificateNode {
    node.role = Some(role);
    node
}

/// Where and why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: String,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

pub fn check(node: &CertificateNode) -> bool {
    check_detailed(node).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LeafJob {
    claim: Claim,
    evidence: LeafEvidence,
    /// Only the exact dimension is required (exception leaves); otherwise it
    /// must also be the expected one.
    exact_only: bool,
}

/// Verify every node; on failure report the first offending node in
/// depth-first order of the structural pass, then of the leaf ranks.
pub fn check_detailed(node: &CertificateNode) -> Result<(), CheckFailure> {
    let budget = node.claim.degrees.iter().map(|&d| d as usize).sum::<usize>() + node.claim.degrees.len();
    if node.depth() > budget {
        return Err(CheckFailure { path: "root".into(), reason: format!("depth {} exceeds {budget}", node.depth()) });
    }
    let mut jobs: Vec<(String, LeafJob)> = Vec::new();
    let mut seen = HashSet::new();
    for (path, n) in node.walk() {
        check_local(n).map_err(|reason| CheckFailure { path: path.clone(), reason })?;
        if let Some(ev) = n.leaf_evidence {
            let job = LeafJob { claim: n.claim.clone(), evidence: ev, exact_only: n.rule == Rule::ExceptionLookup };
            if seen.insert(job.clone()) {
                jobs.push((path, job));
            }
        }
    }
    let results: Vec<Result<(), String>> = jobs.par_iter().map(|(_, job)| verify_leaf(job)).collect();
    for ((path, _), res) in jobs.iter().zip(results) {
        res.map_err(|reason| CheckFailure { path: path.clone(), reason })?;
    }
    Ok(())
}

/// [`check_detailed`] on a pool of `threads` workers (0 for the global pool).
pub fn check_with_threads(node: &CertificateNode, threads: usize) -> Result<(), CheckFailure> {
    if threads == 0 {
        return check_detailed(node);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| check_detailed(node)),
        Err(_) => check_detailed(node),
    }
}

fn verify_leaf(job: &LeafJob) -> Result<(), String> {
    let spec = job.claim.system().map_err(|e| e.to_string())?;
    let ev = job.evidence;
    let rank = crate::with_prime!(ev.prime, F => sample_rank::<F>(&spec, ev.seed))
        .map_err(|e| e.to_string())?;
    if rank != ev.rank {
        return Err(format!("recorded rank {} but recomputed {rank}", ev.rank));
    }
    let dim = spec.section_count() as i64 - 1 - rank as i64;
    if dim != job.claim.dim {
        return Err(format!("rank gives dimension {dim}, claim is {}", job.claim.dim));
    }
    if !job.exact_only && dim != spec.expected_dimension() {
        return Err(format!("rank gives dimension {dim}, expected {}", spec.expected_dimension()));
    }
    Ok(())
}

fn expect_child<'a>(node: &'a CertificateNode, role: Role, raw: &[u32], n: usize) -> Result<&'a CertificateNode, String> {
    let child = node.child(role).ok_or_else(|| format!("missing child {}", role.name()))?;
    let want = normalize(raw).ok_or_else(|| format!("child {} has no positive degree", role.name()))?;
    if child.claim.degrees != want || child.claim.double_points != n {
        return Err(format!(
            "child {} is {:?} with {} points, recomputed {:?} with {n}",
            role.name(),
            child.claim.degrees,
            child.claim.double_points,
            want
        ));
    }
    Ok(child)
}

fn expect_roles(node: &CertificateNode, roles: &[Role]) -> Result<(), String> {
    let mut got: Vec<Option<Role>> = node.children.iter().map(|c| c.role).collect();
    let mut want: Vec<Option<Role>> = roles.iter().copied().map(Some).collect();
    got.sort_by_key(|r| format!("{r:?}"));
    want.sort_by_key(|r| format!("{r:?}"));
    if got != want {
        return Err(format!("children have roles {got:?}, rule needs {want:?}"));
    }
    Ok(())
}

fn expect_dim(what: &str, got: i64, want: i64) -> Result<(), String> {
    if got != want {
        return Err(format!("{what} is {got}, should be {want}"));
    }
    Ok(())
}

/// Checks of one node against its direct children, leaf ranks excluded.
fn check_local(node: &CertificateNode) -> Result<(), String> {
    let claim = &node.claim;
    let d = &claim.degrees;
    if normalize(d).as_ref() != Some(d) {
        return Err(format!("degrees {d:?} are not positive and sorted"));
    }
    let n = claim.double_points;
    let r = d.len();
    let expected = expected_of(d, n).map_err(|e| e.to_string())?;
    let leaf_only = |node: &CertificateNode| -> Result<(), String> {
        if !node.children.is_empty() || node.params.is_some() {
            return Err("leaf rule with children or parameters".into());
        }
        Ok(())
    };
    match node.rule {
        Rule::BaseCase => {
            leaf_only(node)?;
            if node.leaf_evidence.is_none() {
                return Err("base case without rank evidence".into());
            }
            expect_dim("claimed dimension", claim.dim, expected)
        }
        Rule::ExceptionLookup => {
            leaf_only(node)?;
            let deg = MultiDegree::new(d.clone()).map_err(|e| e.to_string())?;
            let c = classify(&deg, n).map_err(|e| e.to_string())?;
            if c.status != Speciality::Special {
                return Err("system is not in the exception table".into());
            }
            expect_dim("claimed dimension", claim.dim, c.dim)
        }
        Rule::Citation => {
            leaf_only(node)?;
            if r < 6 || d.iter().any(|&x| x != 1) {
                return Err("citation covers only degrees (1,...,1) with r >= 6".into());
            }
            expect_dim("claimed dimension", claim.dim, expected)
        }
        Rule::Monotone => {
            if node.params.is_some() || node.leaf_evidence.is_some() {
                return Err("monotone step carries parameters or evidence".into());
            }
            expect_roles(node, &[Role::Bound])?;
            let child = &node.children[0];
            if &child.claim.degrees != d || child.claim.double_points == n {
                return Err("bound must have the same degrees and another number of points".into());
            }
            let m = child.claim.double_points;
            if m > n {
                let v = raw_virtual(d, m);
                if v < -1 {
                    return Err(format!("bound at {m} points has virtual dimension {v} < -1"));
                }
                expect_dim("bound dimension", child.claim.dim, v)?;
                expect_dim("claimed dimension", claim.dim, raw_virtual(d, n))
            } else {
                expect_dim("bound dimension", child.claim.dim, -1)?;
                expect_dim("claimed dimension", claim.dim, -1)
            }
        }
        Rule::SimpleDeg => {
            if node.leaf_evidence.is_some() {
                return Err("degeneration carries leaf evidence".into());
            }
            let p = node.params.ok_or("degeneration without parameters")?;
            let prod = head_product(d) as usize;
            if p.k as usize != r || p.n2 != prod || p.beta != 0 {
                return Err(format!("parameters {p:?} need k = {r}, n2 = {prod}, beta = 0"));
            }
            if p.n1 + p.n2 != n {
                return Err(format!("n1 + n2 = {} but the system has {n} points", p.n1 + p.n2));
            }
            let dr = d[r - 1] as i64;
            if dr < p.k as i64 + 1 {
                return Err(format!("last degree {dr} is below k + 1"));
            }
            expect_roles(node, &[Role::L2, Role::LHat1])?;
            let deg = MultiDegree::new(d.clone()).map_err(|e| e.to_string())?;
            let book = virtual_bookkeeping(&deg, &p);
            expect_dim("v(L2)", book.l2, -1)?;
            expect_dim("v(L_hat1)", book.l_hat1, raw_virtual(d, n))?;
            let l2 = expect_child(node, Role::L2, &with_last(d, p.k as i64).expect("k > 0"), p.n2)?;
            expect_dim("claim on L2", l2.claim.dim, -1)?;
            let raw_hat1 = with_last(d, dr - p.k as i64 - 1).expect("checked above");
            let hat1 = expect_child(node, Role::LHat1, &raw_hat1, p.n1)?;
            expect_dim("claim on L_hat1", hat1.claim.dim, claim.dim)?;
            expect_dim("claimed dimension", claim.dim, expected)
        }
        Rule::DoubleDeg => {
            if node.leaf_evidence.is_some() {
                return Err("degeneration carries leaf evidence".into());
            }
            let p = node.params.ok_or("degeneration without parameters")?;
            if r < 2 {
                return Err("double degeneration needs r >= 2".into());
            }
            let prod = head_product(d) as usize;
            if p.k != 1 {
                return Err(format!("k = {} but a double degeneration has k = 1", p.k));
            }
            if p.beta >= r.min(p.n2) {
                return Err(format!("beta = {} is not below min(r, n2) = {}", p.beta, r.min(p.n2)));
            }
            if r * (p.n2 - p.beta) + p.beta != prod {
                return Err(format!("r(n2 - beta) + beta = {} but the head product is {prod}", r * (p.n2 - p.beta) + p.beta));
            }
            if p.n1 + p.n2 != n {
                return Err(format!("n1 + n2 = {} but the system has {n} points", p.n1 + p.n2));
            }
            let dr = d[r - 1] as i64;
            if dr < 2 {
                return Err("last degree must be at least 2".into());
            }
            expect_roles(node, &[Role::LHat1, Role::LHat2, Role::R2Hypothesis, Role::Transversality, Role::L1])?;
            let deg = MultiDegree::new(d.clone()).map_err(|e| e.to_string())?;
            let book = virtual_bookkeeping(&deg, &p);
            expect_dim("v(L_hat2)", book.l_hat2, -1)?;
            let head = &d[..r - 1];
            let l1_deg = with_last(d, dr - 1).expect("dr >= 2");

            let hat1 = expect_child(node, Role::LHat1, &with_last(d, dr - 2).expect("dr >= 2"), p.n1)?;
            expect_dim("claim on L_hat1", hat1.claim.dim, -1)?;

            let hat2 = expect_child(node, Role::LHat2, head, p.n2 - p.beta)?;
            // beta general simple points on top of the double points
            let dim_hat2 = (hat2.claim.dim - p.beta as i64).max(-1);
            expect_dim("dim L_hat2", dim_hat2, -1)?;

            let r2 = expect_child(node, Role::R2Hypothesis, head, p.n2)?;
            expect_dim("claim on L_(head)(2^n2)", r2.claim.dim, expected_of(head, p.n2).map_err(|e| e.to_string())?)?;

            let tr = expect_child(node, Role::Transversality, &l1_deg, p.n1 + p.beta)?;
            expect_dim("transversality claim", tr.claim.dim, expected_of(&l1_deg, p.n1 + p.beta).map_err(|e| e.to_string())?)?;

            let l1 = expect_child(node, Role::L1, &l1_deg, p.n1)?;
            expect_dim("claim on L1", l1.claim.dim, expected_of(&l1_deg, p.n1).map_err(|e| e.to_string())?)?;

            // L_hat1 empty: the restriction of L1 to R has the dimension of L1
            let dim_r1 = l1.claim.dim;
            let dim_r = (dim_r1 - (p.n2 - p.beta) as i64 - (r * p.beta) as i64).max(-1);
            let dim_l0 = dim_r + hat1.claim.dim + dim_hat2 + 2;
            expect_dim("dim L0", dim_l0, claim.dim)?;
            expect_dim("claimed dimension", claim.dim, expected)
        }
    }
}
