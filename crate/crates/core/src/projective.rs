//! Normalized representatives of the projective plane over a prime field.

/// Points of P²(𝔽_p) as `(1, y, z)`, then `(0, 1, z)`, then `(0, 0, 1)`.
#[derive(Debug, Clone)]
pub struct ProjectivePoints {
    p: u64,
    next: Option<[u64; 3]>,
}

impl ProjectivePoints {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "field size must be at least 2");
        ProjectivePoints {
            p,
            next: Some([1, 0, 0]),
        }
    }
}

impl Iterator for ProjectivePoints {
    type Item = [u64; 3];

    fn next(&mut self) -> Option<[u64; 3]> {
        let cur = self.next?;
        let p = self.p;
        self.next = match cur {
            [1, y, z] if z + 1 < p => Some([1, y, z + 1]),
            [1, y, _] if y + 1 < p => Some([1, y + 1, 0]),
            [1, _, _] => Some([0, 1, 0]),
            [0, 1, z] if z + 1 < p => Some([0, 1, z + 1]),
            [0, 1, _] => Some([0, 0, 1]),
            _ => None,
        };
        Some(cur)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let total = (self.p * self.p + self.p + 1) as usize;
        (0, Some(total))
    }
}

/// Number of points of P²(𝔽_p).
pub fn plane_size(p: u64) -> u64 {
    p * p + p + 1
}
