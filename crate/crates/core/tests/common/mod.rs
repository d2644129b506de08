//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's algorithms; graphs are read through
//! their public edge lists only.
#![allow(dead_code)]

use pcn_resilience::{ChannelEdge, Node, PcnGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Undirected simple adjacency matrix of `g` (parallel channels collapsed).
pub fn adjacency(g: &PcnGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for e in g.edges() {
        let (x, y) = (g.node_index(&e.a).unwrap(), g.node_index(&e.b).unwrap());
        a[x][y] = true;
        a[y][x] = true;
    }
    a
}

/// All-pairs hop distances by Floyd–Warshall; `usize::MAX` if unreachable.
pub fn floyd(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    for row in d.iter_mut() {
        for x in row.iter_mut() {
            if *x >= inf {
                *x = usize::MAX;
            }
        }
    }
    d
}

fn shortest_paths(a: &[Vec<bool>], d: &[Vec<usize>], s: usize, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let v = *path.last().unwrap();
    if v == t {
        out.push(path.clone());
        return;
    }
    for w in 0..a.len() {
        if a[v][w] && d[s][w] == path.len() && d[w][t] != usize::MAX && d[s][w] + d[w][t] == d[s][t] {
            path.push(w);
            shortest_paths(a, d, s, t, path, out);
            path.pop();
        }
    }
}

/// Normalised betweenness by enumerating every shortest path of every pair.
pub fn brute_betweenness(g: &PcnGraph) -> Vec<f64> {
    let a = adjacency(g);
    let d = floyd(&a);
    let n = a.len();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t] == usize::MAX {
                continue;
            }
            let mut paths = Vec::new();
            shortest_paths(&a, &d, s, t, &mut vec![s], &mut paths);
            let total = paths.len() as f64;
            for (v, score) in bc.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                *score += through / total;
            }
        }
    }
    if n > 2 {
        let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
        bc.iter_mut().for_each(|x| *x /= pairs);
    }
    bc
}

/// `3·triangles / connected triples` by triple loops.
pub fn brute_transitivity(g: &PcnGraph) -> f64 {
    let a = adjacency(g);
    let n = a.len();
    let mut triangles = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if a[i][j] && a[j][k] && a[i][k] {
                    triangles += 1;
                }
            }
        }
    }
    let mut triples = 0u64;
    for row in &a {
        let deg = row.iter().filter(|&&x| x).count() as u64;
        triples += deg * deg.saturating_sub(1) / 2;
    }
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx] = ry;
        }
    }
}

/// Component sizes among nodes with `alive[v]`, by union-find over the edge list.
pub fn component_sizes(g: &PcnGraph, alive: &[bool]) -> Vec<usize> {
    let n = g.node_count();
    let mut uf = UnionFind::new(n);
    for e in g.edges() {
        let (x, y) = (g.node_index(&e.a).unwrap(), g.node_index(&e.b).unwrap());
        if alive[x] && alive[y] {
            uf.union(x, y);
        }
    }
    let mut size = vec![0usize; n];
    for v in (0..n).filter(|&v| alive[v]) {
        let r = uf.find(v);
        size[r] += 1;
    }
    let mut sizes: Vec<usize> = size.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn component_count(g: &PcnGraph) -> usize {
    component_sizes(g, &vec![true; g.node_count()]).len()
}

/// Nodes whose removal increases the component count.
pub fn brute_articulation(g: &PcnGraph) -> Vec<usize> {
    let n = g.node_count();
    let base = component_count(g);
    (0..n)
        .filter(|&v| {
            let mut alive = vec![true; n];
            alive[v] = false;
            component_sizes(g, &alive).len() > base
        })
        .collect()
}

/// Directed arc capacities `cap[u][v]` = summed balance from `u` towards `v`.
pub fn balance_matrix(g: &PcnGraph) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut cap = vec![vec![0u64; n]; n];
    for e in g.edges() {
        let (x, y) = (g.node_index(&e.a).unwrap(), g.node_index(&e.b).unwrap());
        cap[x][y] += e.balance_ab;
        cap[y][x] += e.balance_ba;
    }
    cap
}

/// Minimum `s`–`t` cut value by enumerating every vertex bipartition.
pub fn cut_enumeration(cap: &[Vec<u64>], s: usize, t: usize) -> u64 {
    let n = cap.len();
    let mut best = u64::MAX;
    for mask in 0u32..(1 << n) {
        if mask & (1 << s) == 0 || mask & (1 << t) != 0 {
            continue;
        }
        let mut value = 0;
        for u in (0..n).filter(|&u| mask & (1 << u) != 0) {
            for v in (0..n).filter(|&v| mask & (1 << v) == 0) {
                value += cap[u][v];
            }
        }
        best = best.min(value);
    }
    best
}

/// Edmonds–Karp on a dense capacity matrix.
pub fn edmonds_karp(cap: &[Vec<u64>], s: usize, t: usize) -> u64 {
    let n = cap.len();
    let mut r = cap.to_vec();
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && r[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(r[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            r[prev[v]][v] -= bottleneck;
            r[v][prev[v]] += bottleneck;
            v = prev[v];
        }
        flow += bottleneck;
    }
}

/// Random channel graph: `n` nodes `v0..`, each pair linked with probability
/// `p`, occasional parallel channels, random capacities and balances.
pub fn random_channel_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> PcnGraph {
    let nodes = (0..n).map(|i| Node::new(format!("v{i}").as_str())).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !rng.random_bool(p) {
                continue;
            }
            let copies = if rng.random_bool(0.15) { 2 } else { 1 };
            for _ in 0..copies {
                let cap = rng.random_range(1..=20u64);
                let (x, y) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
                let ab = rng.random_range(0..=cap);
                let ba = rng.random_range(0..=cap);
                edges.push(
                    ChannelEdge::new(format!("c{}", edges.len()), format!("v{x}").as_str(), format!("v{y}").as_str(), cap)
                        .with_balances(ab, ba),
                );
            }
        }
    }
    PcnGraph::new(nodes, edges).unwrap()
}

/// The fixed corpus of small graphs used by the oracle-equivalence checks.
pub fn small_corpus(count: usize, seed: u64) -> Vec<PcnGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=8);
            let p = rng.random_range(0.15..0.85);
            random_channel_graph(&mut rng, n, p)
        })
        .collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300) || (a - b).abs() < 1e-15
}

/// Compares every library metric covered by the oracles above on one graph.
/// Returns a description of the first disagreement.
pub fn check_against_oracles(g: &PcnGraph) -> Result<usize, String> {
    use pcn_resilience::payment::FlowNetwork;
    use pcn_resilience::topology::{betweenness_scores, biconnected_analysis, transitivity};

    let mut checks = 0;
    let n = g.node_count();

    let lib = betweenness_scores(&g.simple_projection(), true);
    let oracle = brute_betweenness(g);
    for v in 0..n {
        if !close(lib[v], oracle[v], 1e-9) {
            return Err(format!("betweenness of {}: {} vs {}", g.node_id(v), lib[v], oracle[v]));
        }
        checks += 1;
    }

    let (t_lib, t_oracle) = (transitivity(g), brute_transitivity(g));
    if !close(t_lib, t_oracle, 1e-9) {
        return Err(format!("transitivity {t_lib} vs {t_oracle}"));
    }
    checks += 1;

    let (c_lib, c_oracle) = (g.component_count(), component_count(g));
    if c_lib != c_oracle {
        return Err(format!("components {c_lib} vs {c_oracle}"));
    }
    let lcc = g.largest_component_nodes().len();
    if lcc != component_sizes(g, &vec![true; n]).first().copied().unwrap_or(0) {
        return Err("largest component size".into());
    }
    checks += 2;

    let art: Vec<usize> = {
        let b = biconnected_analysis(g);
        b.articulation_points.iter().map(|id| g.node_index(id).unwrap()).collect::<std::collections::BTreeSet<_>>().into_iter().collect()
    };
    if art != brute_articulation(g) {
        return Err(format!("articulation points {art:?} vs {:?}", brute_articulation(g)));
    }
    checks += 1;

    let cap = balance_matrix(g);
    let mut net = FlowNetwork::from_balances(g);
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let (value, side) = net.min_cut(s, t);
            let enumerated = cut_enumeration(&cap, s, t);
            let ek = edmonds_karp(&cap, s, t);
            if value != enumerated || value != ek {
                return Err(format!("max flow {s}->{t}: {value}, cut enumeration {enumerated}, Edmonds-Karp {ek}"));
            }
            if !side[s] || side[t] {
                return Err(format!("min cut {s}->{t} does not separate the terminals"));
            }
            let crossing: u64 = (0..n)
                .filter(|&u| side[u])
                .flat_map(|u| (0..n).filter(|&v| !side[v]).map(move |v| (u, v)))
                .map(|(u, v)| cap[u][v])
                .sum();
            if crossing != value {
                return Err(format!("min cut {s}->{t} crossing capacity {crossing} vs flow {value}"));
            }
            checks += 4;
        }
    }
    Ok(checks)
}

/// Devroye's rejection sampler for the Zipf law `P(k) ∝ k^-a` on `k ≥ 1`,
/// restricted to `k ≥ x_min` by discarding smaller draws. Exact, and shares
/// no code with the library sampler.
pub fn zipf_tail(rng: &mut ChaCha8Rng, a: f64, x_min: u64, n: usize) -> Vec<u64> {
    let b = 2f64.powf(a - 1.0);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        let x = u.powf(-1.0 / (a - 1.0)).floor();
        if !x.is_finite() || x > 1e15 {
            continue;
        }
        let t = (1.0 + 1.0 / x).powf(a - 1.0);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b && x as u64 >= x_min {
            out.push(x as u64);
        }
    }
    out
}
