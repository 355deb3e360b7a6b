use std::fmt;
use std::str::FromStr;

/// Single-site Pauli symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Whether the symbol flips the computational basis bit (X, Y).
    pub fn flips(self) -> bool { matches!(self, Pauli::X | Pauli::Y) }

    /// Whether the symbol carries a `(-1)^b` sign (Z, Y).
    pub fn signs(self) -> bool { matches!(self, Pauli::Z | Pauli::Y) }

    pub fn index(self) -> usize { self as usize }

    /// Real 2x2 matrix `⟨s'|σ|s⟩`, with Y replaced by `Ỹ = -iY`.
    pub(crate) fn real_matrix(self) -> [[f64; 2]; 2] {
        match self {
            Pauli::I => [[1.0, 0.0], [0.0, 1.0]],
            Pauli::X => [[0.0, 1.0], [1.0, 0.0]],
            Pauli::Y => [[0.0, -1.0], [1.0, 0.0]],
            Pauli::Z => [[1.0, 0.0], [0.0, -1.0]],
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of single-site Paulis, site 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(symbols: Vec<Pauli>) -> Self { Self(symbols) }

    pub fn identity(n: usize) -> Self { Self(vec![Pauli::I; n]) }

    pub fn len(&self) -> usize { self.0.len() }

    pub fn is_empty(&self) -> bool { self.0.is_empty() }

    pub fn symbols(&self) -> &[Pauli] { &self.0 }

    pub fn set(&mut self, site: usize, p: Pauli) { self.0[site] = p; }

    pub fn y_count(&self) -> usize { self.0.iter().filter(|&&p| p == Pauli::Y).count() }

    /// Big-endian index mask of flipped sites.
    pub fn flip_mask(&self) -> u64 { self.mask(Pauli::flips) }

    /// Big-endian index mask of sign-carrying sites.
    pub fn sign_mask(&self) -> u64 { self.mask(Pauli::signs) }

    fn mask(&self, pick: fn(Pauli) -> bool) -> u64 {
        self.0.iter().fold(0, |acc, &p| acc << 1 | pick(p) as u64)
    }

    /// Decode a base-4 index, site 1 in the most significant digit.
    pub fn from_index(n: usize, mut index: u64) -> Self {
        let mut out = vec![Pauli::I; n];
        for slot in out.iter_mut().rev() {
            *slot = Pauli::ALL[(index & 3) as usize];
            index >>= 2;
        }
        Self(out)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

impl FromStr for PauliString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(format!("not a Pauli symbol: {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}
