/// Iterator over all set partitions of `0..n` via restricted growth strings.
/// Blocks are listed by least element, each block sorted.
pub struct SetPartitions {
    n: usize,
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions {
        n,
        rgs: vec![0; n],
        maxes: vec![0; n],
        done: false,
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.n;
        let nblocks = if n == 0 {
            0
        } else {
            self.rgs.iter().max().unwrap() + 1
        };
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        // advance: rightmost position that can grow
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let prev_max = self.maxes[i - 1];
            if self.rgs[i] <= prev_max {
                self.rgs[i] += 1;
                let m = prev_max.max(self.rgs[i]);
                self.maxes[i] = m;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = m;
                }
                break;
            }
        }
        Some(blocks)
    }
}

/// Bell numbers `B_0..=B_n`.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}
