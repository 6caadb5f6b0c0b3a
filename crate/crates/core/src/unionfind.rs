/// Disjoint-set forest with union by rank and path halving. Each root
/// remembers the smallest element of its set, which is the component id
/// used throughout the tree model.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    min: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize);
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            min: (0..n as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Smallest element of the set containing `x`.
    pub(crate) fn id(&mut self, x: usize) -> usize {
        let root = self.find(x);
        self.min[root] as usize
    }

    /// Returns false when `a` and `b` were already together.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Equal => {
                self.rank[ra] += 1;
                (ra, rb)
            }
        };
        self.parent[lo] = hi as u32;
        self.min[hi] = self.min[hi].min(self.min[lo]);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_minimum_element() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(4, 5));
        assert_eq!(uf.id(5), 4);
        assert!(uf.union(5, 2));
        assert_eq!(uf.id(4), 2);
        assert!(!uf.union(2, 4));
        assert!(uf.union(0, 1));
        assert_eq!(uf.id(1), 0);
        assert_ne!(uf.find(0), uf.find(2));
        assert_eq!(uf.id(3), 3);
    }
}
