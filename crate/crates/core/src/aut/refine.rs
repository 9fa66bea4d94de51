use crate::graph::Graph;

/// Ordered partition of `0..n`. Cells are contiguous runs of `lab`,
/// identified by their start position.
#[derive(Clone, Debug)]
pub(crate) struct Partition {
    pub lab: Vec<u32>,
    /// `cell_of[v]` is the start position of the cell holding `v`.
    pub cell_of: Vec<u32>,
    /// `len[s]` is the length of the cell starting at `s` (stale elsewhere).
    pub len: Vec<u32>,
    pub cells: usize,
}

impl Partition {
    pub fn unit(n: usize) -> Partition {
        let mut len = vec![0; n.max(1)];
        len[0] = n as u32;
        Partition { lab: (0..n as u32).collect(), cell_of: vec![0; n], len, cells: usize::from(n > 0) }
    }

    /// Partition whose cells are the given color classes, ordered by color.
    pub fn from_colors(colors: &[u32]) -> Partition {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut p = Partition { lab, cell_of: vec![0; n], len: vec![0; n.max(1)], cells: 0 };
        let mut start = 0;
        while start < n {
            let c = colors[p.lab[start] as usize];
            let mut end = start;
            while end < n && colors[p.lab[end] as usize] == c {
                p.cell_of[p.lab[end] as usize] = start as u32;
                end += 1;
            }
            p.len[start] = (end - start) as u32;
            p.cells += 1;
            start = end;
        }
        p
    }

    pub fn n(&self) -> usize {
        self.lab.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    /// Cell starts in position order.
    pub fn starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.n() {
            out.push(s);
            s += self.len[s] as usize;
        }
        out
    }

    /// First cell of maximum size among non-singleton cells.
    pub fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, u32)> = None;
        let mut s = 0;
        while s < self.n() {
            let l = self.len[s];
            if l > 1 && best.is_none_or(|(_, bl)| l > bl) {
                best = Some((s, l));
            }
            s += l as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Vertices of the cell at `start`, ascending.
    pub fn cell_vertices(&self, start: usize) -> Vec<u32> {
        let mut v = self.lab[start..start + self.len[start] as usize].to_vec();
        v.sort_unstable();
        v
    }

    /// Moves `v` into a singleton cell at the front of its cell; returns
    /// the start of the singleton.
    pub fn individualize(&mut self, v: u32) -> usize {
        let s = self.cell_of[v as usize] as usize;
        let l = self.len[s] as usize;
        debug_assert!(l > 1);
        let pos = s + self.lab[s..s + l].iter().position(|&x| x == v).unwrap();
        self.lab.swap(s, pos);
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for k in s + 1..s + l {
            self.cell_of[self.lab[k] as usize] = (s + 1) as u32;
        }
        self.cells += 1;
        s
    }
}

/// Running hash of refinement events, compared between search nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Trace(pub u64);

impl Trace {
    pub fn new() -> Trace {
        Trace(0xcbf2_9ce4_8422_2325)
    }

    pub fn push(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(17);
    }
}

/// Scratch buffers for refinement, reused across nodes.
pub(crate) struct Refiner {
    count: Vec<u32>,
    touched_cells: Vec<u32>,
    cell_touched: Vec<bool>,
    in_queue: Vec<bool>,
    queue: std::collections::VecDeque<u32>,
    buf: Vec<(u32, u32)>,
}

impl Refiner {
    pub fn new(n: usize) -> Refiner {
        Refiner {
            count: vec![0; n],
            touched_cells: Vec::new(),
            cell_touched: vec![false; n.max(1)],
            in_queue: vec![false; n.max(1)],
            queue: std::collections::VecDeque::new(),
            buf: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition finer than it, using
    /// the cells starting at `splitters` as the initial queue. Fragments of
    /// a split cell are ordered by increasing neighbour count.
    pub fn refine(&mut self, g: &Graph, p: &mut Partition, splitters: &[usize], trace: &mut Trace) {
        for &s in splitters {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                self.queue.push_back(s as u32);
            }
        }
        while let Some(w) = self.queue.pop_front() {
            let w = w as usize;
            self.in_queue[w] = false;
            if p.is_discrete() {
                continue;
            }
            let wl = p.len[w] as usize;
            // neighbour counts into the splitter
            for k in w..w + wl {
                let v = p.lab[k] as usize;
                for &u in g.neighbors(v) {
                    let u = u as usize;
                    if self.count[u] == 0 {
                        let c = p.cell_of[u] as usize;
                        if !self.cell_touched[c] {
                            self.cell_touched[c] = true;
                            self.touched_cells.push(c as u32);
                        }
                    }
                    self.count[u] += 1;
                }
            }
            self.touched_cells.sort_unstable();
            trace.push(0x5151 ^ w as u64);
            let touched = std::mem::take(&mut self.touched_cells);
            for &c in &touched {
                let c = c as usize;
                self.cell_touched[c] = false;
                let cl = p.len[c] as usize;
                self.buf.clear();
                for k in c..c + cl {
                    let v = p.lab[k];
                    self.buf.push((self.count[v as usize], v));
                }
                let first = self.buf[0].0;
                if self.buf.iter().all(|&(x, _)| x == first) {
                    trace.push(((c as u64) << 32) ^ first as u64 ^ 0xabc);
                    continue;
                }
                self.buf.sort_unstable();
                let was_queued = self.in_queue[c];
                let mut start = c;
                let mut k = 0;
                while k < cl {
                    let val = self.buf[k].0;
                    let mut e = k;
                    while e < cl && self.buf[e].0 == val {
                        let v = self.buf[e].1;
                        p.lab[c + e] = v;
                        p.cell_of[v as usize] = start as u32;
                        e += 1;
                    }
                    p.len[start] = (e - k) as u32;
                    trace.push(((start as u64) << 40) ^ ((val as u64) << 20) ^ (e - k) as u64);
                    if start != c {
                        p.cells += 1;
                    }
                    if start != c || !was_queued {
                        self.in_queue[start] = true;
                        self.queue.push_back(start as u32);
                    }
                    start = c + e;
                    k = e;
                }
            }
            for k in w..w + wl {
                for &u in g.neighbors(p.lab[k] as usize) {
                    self.count[u as usize] = 0;
                }
            }
            self.touched_cells = touched;
            self.touched_cells.clear();
        }
        trace.push(p.cells as u64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_equitable(g: &Graph, p: &Partition) -> bool {
        let starts = p.starts();
        starts.iter().all(|&c| {
            let cell = p.cell_vertices(c);
            starts.iter().all(|&w| {
                let wset = p.cell_vertices(w);
                let cnt = |v: u32| wset.iter().filter(|&&x| g.has_edge(v as usize, x as usize)).count();
                cell.iter().all(|&v| cnt(v) == cnt(cell[0]))
            })
        })
    }

    #[test]
    fn refinement_is_equitable() {
        // path on 5 vertices: orbits {0,4}, {1,3}, {2}
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut p = Partition::unit(5);
        let mut r = Refiner::new(5);
        let mut t = Trace::new();
        r.refine(&g, &mut p, &[0], &mut t);
        assert_eq!(p.cells, 3);
        assert!(is_equitable(&g, &p));
        let s = p.individualize(0);
        r.refine(&g, &mut p, &[s], &mut t);
        assert!(p.is_discrete());
    }

    #[test]
    fn trace_is_label_invariant() {
        let g = crate::graph::generalized_petersen(5, 2).unwrap();
        let perm = crate::perm::Permutation::from_images(vec![3, 7, 1, 9, 0, 5, 2, 8, 6, 4]).unwrap();
        let h = g.relabel(&perm).unwrap();
        let mut r = Refiner::new(10);
        let (mut p1, mut p2) = (Partition::unit(10), Partition::unit(10));
        let (mut t1, mut t2) = (Trace::new(), Trace::new());
        r.refine(&g, &mut p1, &[0], &mut t1);
        r.refine(&h, &mut p2, &[0], &mut t2);
        let s1 = p1.individualize(0);
        let s2 = p2.individualize(perm.apply(0) as u32);
        r.refine(&g, &mut p1, &[s1], &mut t1);
        r.refine(&h, &mut p2, &[s2], &mut t2);
        assert_eq!(t1, t2);
        assert!(is_equitable(&g, &p1));
    }
}
