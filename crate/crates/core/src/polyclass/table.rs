use crate::judge::Criterion;
use crate::profile::{ClassStructure, TopologyKind};

/// Precomputed compatibility of class triples. Class 0 is the dummy that
/// pads paths; real classes are shifted up by one.
#[derive(Clone, Debug)]
pub struct TripleTable {
    /// Classes including the dummy.
    width: usize,
    criterion: Criterion,
    kind: TopologyKind,
    values: Vec<i64>,
    long: Vec<bool>,
    short: Vec<bool>,
}

impl TripleTable {
    pub fn new(c: &ClassStructure, kind: TopologyKind, criterion: Criterion) -> Self {
        let w = c.k() + 1;
        let mut values = vec![0i64; w * w];
        for a in 1..w {
            for b in 1..w {
                values[a * w + b] = c.value(a - 1, b - 1);
            }
        }
        let mut table = Self {
            width: w,
            criterion,
            kind,
            values,
            long: Vec::new(),
            short: Vec::new(),
        };
        let triples = w * w * w;
        let mut long = vec![false; triples * triples];
        for t1 in 0..triples {
            let (a, b, cc) = table.split(t1);
            for t2 in 0..triples {
                let (d, e, f) = table.split(t2);
                long[t1 * triples + t2] = table.eval_long(a, b, cc, d, e, f);
            }
        }
        let mut short = vec![false; triples * w];
        for t1 in 0..triples {
            let (a, b, cc) = table.split(t1);
            for d in 0..w {
                short[t1 * w + d] = table.eval_short(a, b, cc, d);
            }
        }
        table.long = long;
        table.short = short;
        table
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    #[inline]
    fn p(&self, from: usize, to: usize) -> i64 {
        self.values[from * self.width + to]
    }

    fn combine(&self, x: bool, y: bool) -> bool {
        match self.criterion {
            Criterion::EnvyFree => x && y,
            Criterion::Stable => x || y,
        }
    }

    fn eval_long(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> bool {
        let b_stays = self.p(b, a) + self.p(b, c) >= self.p(b, d) + self.p(b, f);
        let e_stays = self.p(e, d) + self.p(e, f) >= self.p(e, a) + self.p(e, c);
        self.combine(b_stays, e_stays)
    }

    fn eval_short(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let b_stays = self.p(b, a) >= self.p(b, d);
        let c_stays = self.p(c, d) >= self.p(c, a);
        self.combine(b_stays, c_stays)
    }

    fn split(&self, t: usize) -> (usize, usize, usize) {
        let w = self.width;
        (t / (w * w), t / w % w, t % w)
    }

    #[inline]
    pub fn id(&self, a: usize, b: usize, c: usize) -> u16 {
        ((a * self.width + b) * self.width + c) as u16
    }

    /// Long-range compatibility of two triple ids.
    #[inline]
    pub fn long_ids(&self, t1: u16, t2: u16) -> bool {
        let triples = self.width.pow(3);
        self.long[usize::from(t1) * triples + usize::from(t2)]
    }

    /// Long-range compatibility of `(a, b, c)` and `(d, e, f)`.
    pub fn long(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> bool {
        self.long_ids(self.id(a, b, c), self.id(d, e, f))
    }

    /// Short-range compatibility of `(a, b, c)` and `(b, c, d)`.
    #[inline]
    pub fn short(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.short[usize::from(self.id(a, b, c)) * self.width + d]
    }
}
