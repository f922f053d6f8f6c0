//! Integral min-cost flow with lower bounds, and max flow.
//!
//! Lower bounds are removed by the usual excess transformation: an edge
//! `(u, v, lb, cap)` becomes `(u, v, 0, cap - lb)` while `v` gains `lb`
//! units of excess and `u` a matching deficit. A super source feeds every
//! excess, a super sink drains every deficit, and the required s-t value is
//! pinned by a `t -> s` edge with `lb = cap = value`. The bounded problem is
//! feasible iff the super source saturates. Shortest paths use Dijkstra with
//! Johnson potentials, which is valid because all costs are non-negative.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt::Write;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Demand: the flow on this edge must be at least `lb`.
    pub lb: i64,
    pub cap: i64,
    pub cost: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    pub source: usize,
    pub sink: usize,
    edges: Vec<Edge>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { nodes, source, sink, edges: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Returns the edge index. Validation is deferred to the solve.
    pub fn add_edge(&mut self, from: usize, to: usize, lb: i64, cap: i64, cost: i64) -> usize {
        self.edges.push(Edge { from, to, lb, cap, cost });
        self.edges.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::MalformedNetwork(s));
        if self.source >= self.nodes || self.sink >= self.nodes {
            return bad(format!("source/sink outside 0..{}", self.nodes));
        }
        if self.source == self.sink {
            return bad("source equals sink".to_string());
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.nodes || e.to >= self.nodes {
                return bad(format!("edge {i} has an unknown endpoint"));
            }
            if e.from == e.to {
                return bad(format!("edge {i} is a self-loop"));
            }
            if e.lb < 0 || e.cost < 0 || e.lb > e.cap {
                return bad(format!("edge {i} needs 0 <= lb <= cap and cost >= 0"));
            }
        }
        Ok(())
    }

    /// Line-oriented dump: a header, then `edge <from> <to> <lb> <cap> <cost>`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nodes {}", self.nodes);
        let _ = writeln!(s, "source {}", self.source);
        let _ = writeln!(s, "sink {}", self.sink);
        for e in &self.edges {
            let _ = writeln!(s, "edge {} {} {} {} {}", e.from, e.to, e.lb, e.cap, e.cost);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub feasible: bool,
    pub cost: i64,
    /// Flow per edge, in insertion order. Empty when infeasible.
    pub flow: Vec<i64>,
}

/// Residual graph for successive shortest paths.
struct Residual {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), cost: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    /// Pushes up to `want` units s -> t along cheapest paths. Returns (sent, cost).
    fn min_cost_flow(&mut self, s: usize, t: usize, want: i64) -> Result<(i64, i64)> {
        let n = self.head.len();
        let mut pot = vec![0i64; n];
        let mut sent = 0i64;
        let mut total = 0i64;
        const INF: i64 = i64::MAX;
        while sent < want {
            let mut dist = vec![INF; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &e in &self.head[u] {
                    if self.cap[e] == 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let rc = self.cost[e] + pot[u] - pot[v];
                    let nd = d.checked_add(rc).ok_or(Error::Overflow)?;
                    // strict improvement keeps the lowest edge index on ties
                    if nd < dist[v] {
                        dist[v] = nd;
                        via[v] = e;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            if dist[t] == INF {
                break;
            }
            for v in 0..n {
                if dist[v] != INF {
                    pot[v] = pot[v].checked_add(dist[v]).ok_or(Error::Overflow)?;
                }
            }
            let mut push = want - sent;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                total = push
                    .checked_mul(self.cost[e])
                    .and_then(|c| total.checked_add(c))
                    .ok_or(Error::Overflow)?;
                v = self.to[e ^ 1];
            }
            sent += push;
        }
        Ok((sent, total))
    }
}

/// Cheapest integral flow of exactly `value` units from source to sink that
/// meets every edge's lower bound and capacity.
pub fn min_cost_flow_with_demands(net: &FlowNetwork, value: i64) -> Result<FlowResult> {
    net.validate()?;
    if value < 0 {
        return Err(Error::MalformedNetwork(format!("negative flow value {value}")));
    }
    let n = net.nodes;
    let (ss, tt) = (n, n + 1);
    let mut res = Residual::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut base = 0i64;
    let mut ids = Vec::with_capacity(net.edges.len());
    for e in &net.edges {
        ids.push(res.add(e.from, e.to, e.cap - e.lb, e.cost));
        excess[e.to] = excess[e.to].checked_add(e.lb).ok_or(Error::Overflow)?;
        excess[e.from] = excess[e.from].checked_sub(e.lb).ok_or(Error::Overflow)?;
        base = e.lb.checked_mul(e.cost).and_then(|c| base.checked_add(c)).ok_or(Error::Overflow)?;
    }
    // pinned return edge t -> s with lb = cap = value
    excess[net.source] = excess[net.source].checked_add(value).ok_or(Error::Overflow)?;
    excess[net.sink] = excess[net.sink].checked_sub(value).ok_or(Error::Overflow)?;
    let mut need = 0i64;
    for (v, &x) in excess.iter().enumerate() {
        if x > 0 {
            res.add(ss, v, x, 0);
            need = need.checked_add(x).ok_or(Error::Overflow)?;
        } else if x < 0 {
            res.add(v, tt, -x, 0);
        }
    }
    let (sent, cost) = res.min_cost_flow(ss, tt, need)?;
    if sent < need {
        return Ok(FlowResult { feasible: false, cost: 0, flow: Vec::new() });
    }
    let flow: Vec<i64> = net.edges.iter().zip(&ids).map(|(e, &id)| e.lb + res.cap[id ^ 1]).collect();
    let cost = cost.checked_add(base).ok_or(Error::Overflow)?;
    let out = FlowResult { feasible: true, cost, flow };
    debug_assert!(check_flow(net, value, &out.flow).is_ok());
    Ok(out)
}

/// Maximum s-t flow (Dinic). Lower bounds must be zero.
pub fn max_flow(net: &FlowNetwork) -> Result<i64> {
    Ok(max_flow_with_edges(net)?.0)
}

/// Maximum flow value and a per-edge flow attaining it.
pub fn max_flow_with_edges(net: &FlowNetwork) -> Result<(i64, Vec<i64>)> {
    net.validate()?;
    if let Some(i) = net.edges.iter().position(|e| e.lb != 0) {
        return Err(Error::MalformedNetwork(format!("edge {i} has a lower bound; use min_cost_flow_with_demands")));
    }
    let mut res = Residual::new(net.nodes);
    let ids: Vec<usize> = net.edges.iter().map(|e| res.add(e.from, e.to, e.cap, 0)).collect();
    let (s, t) = (net.source, net.sink);
    let n = net.nodes;
    let mut total = 0i64;
    loop {
        let mut level = vec![usize::MAX; n];
        level[s] = 0;
        let mut queue = alloc::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &res.head[u] {
                let v = res.to[e];
                if res.cap[e] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        let mut it = vec![0usize; n];
        loop {
            let f = dinic_dfs(&mut res, &level, &mut it, s, t, i64::MAX);
            if f == 0 {
                break;
            }
            total = total.checked_add(f).ok_or(Error::Overflow)?;
        }
    }
    let flow = ids.iter().map(|&id| res.cap[id ^ 1]).collect();
    Ok((total, flow))
}

fn dinic_dfs(res: &mut Residual, level: &[usize], it: &mut [usize], u: usize, t: usize, f: i64) -> i64 {
    if u == t {
        return f;
    }
    while it[u] < res.head[u].len() {
        let e = res.head[u][it[u]];
        let v = res.to[e];
        if res.cap[e] > 0 && level[v] == level[u] + 1 {
            let d = dinic_dfs(res, level, it, v, t, f.min(res.cap[e]));
            if d > 0 {
                res.cap[e] -= d;
                res.cap[e ^ 1] += d;
                return d;
            }
        }
        it[u] += 1;
    }
    0
}

/// Independent check of bounds and conservation; returns the flow's cost.
pub fn check_flow(net: &FlowNetwork, value: i64, flow: &[i64]) -> Result<i64> {
    let bad = |s: String| Err(Error::Internal(s));
    if flow.len() != net.edges.len() {
        return bad(format!("flow has {} entries for {} edges", flow.len(), net.edges.len()));
    }
    let mut bal = vec![0i64; net.nodes];
    let mut cost = 0i64;
    for (i, (e, &f)) in net.edges.iter().zip(flow).enumerate() {
        if f < e.lb || f > e.cap {
            return bad(format!("edge {i} carries {f} outside [{}, {}]", e.lb, e.cap));
        }
        bal[e.from] -= f;
        bal[e.to] += f;
        cost += f * e.cost;
    }
    for (v, &b) in bal.iter().enumerate() {
        let want = if v == net.source {
            -value
        } else if v == net.sink {
            value
        } else {
            0
        };
        if b != want {
            return bad(format!("node {v} imbalance {b}, expected {want}"));
        }
    }
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edges() {
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 0, 1, 5);
        let r = min_cost_flow_with_demands(&g, 1).unwrap();
        assert!(r.feasible);
        assert_eq!(r.cost, 5);

        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 2, 3, 1);
        assert!(!min_cost_flow_with_demands(&g, 1).unwrap().feasible);
    }

    #[test]
    fn parallel_edges() {
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 0, 1, 1);
        g.add_edge(0, 1, 0, 1, 3);
        let r = min_cost_flow_with_demands(&g, 2).unwrap();
        assert_eq!((r.feasible, r.cost), (true, 4));
        assert_eq!(r.flow, [1, 1]);
    }

    #[test]
    fn diamond_with_demand() {
        let mut g = FlowNetwork::new(3, 0, 2);
        g.add_edge(0, 1, 0, 2, 0);
        g.add_edge(1, 2, 1, 1, 10);
        g.add_edge(1, 2, 0, 1, 1);
        let r = min_cost_flow_with_demands(&g, 2).unwrap();
        assert_eq!((r.feasible, r.cost), (true, 11));
        // value 1 still has to route through the demanded edge
        let r = min_cost_flow_with_demands(&g, 1).unwrap();
        assert_eq!((r.feasible, r.cost, r.flow), (true, 10, vec![1, 1, 0]));
    }

    #[test]
    fn malformed() {
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 0, 0, 1, 0);
        assert!(min_cost_flow_with_demands(&g, 0).is_err());
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 2, 1, 0);
        assert!(min_cost_flow_with_demands(&g, 0).is_err());
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 5, 0, 1, 0);
        assert!(max_flow(&g).is_err());
    }

    #[test]
    fn max_flows() {
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 0, 7, 0);
        assert_eq!(max_flow(&g).unwrap(), 7);

        let mut g = FlowNetwork::new(3, 0, 2);
        g.add_edge(0, 1, 0, 3, 0);
        g.add_edge(1, 2, 0, 2, 0);
        assert_eq!(max_flow(&g).unwrap(), 2);

        // 2x2 complete bipartite
        let mut g = FlowNetwork::new(6, 0, 5);
        for l in 1..=2 {
            g.add_edge(0, l, 0, 1, 0);
            g.add_edge(l + 2, 5, 0, 1, 0);
            for r in 3..=4 {
                g.add_edge(l, r, 0, 1, 0);
            }
        }
        assert_eq!(max_flow(&g).unwrap(), 2);

        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 1, 1, 0);
        assert!(max_flow(&g).is_err());
    }

    #[test]
    fn dump_format() {
        let mut g = FlowNetwork::new(2, 0, 1);
        g.add_edge(0, 1, 1, 2, 3);
        assert_eq!(g.dump(), "nodes 2\nsource 0\nsink 1\nedge 0 1 1 2 3\n");
    }
}
