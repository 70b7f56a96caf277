/// Max-heap of variables ordered by activity, with position index so that
/// activity bumps can sift in place.
#[derive(Debug, Clone, Default)]
pub(crate) struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    pub fn new(n: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.pos[v as usize].is_some()
    }

    pub fn insert(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        self.pos[v as usize] = Some(self.heap.len() - 1);
        self.up(self.heap.len() - 1, act);
    }

    /// Restores the heap property after `v`'s activity increased.
    pub fn increased(&mut self, v: u32, act: &[f64]) {
        if let Some(i) = self.pos[v as usize] {
            self.up(i, act);
        }
    }

    pub fn pop(&mut self, act: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.pos[self.heap[0] as usize] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && act[self.heap[r] as usize] > act[self.heap[l] as usize] {
                r
            } else {
                l
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_activity_order() {
        let act = vec![0.5, 3.0, 1.0, 2.0, 0.0];
        let mut h = VarHeap::new(act.len());
        for v in 0..5 {
            h.insert(v, &act);
        }
        let order: Vec<u32> = std::iter::from_fn(|| h.pop(&act)).collect();
        assert_eq!(order, vec![1, 3, 2, 0, 4]);
    }
}
