//! Frames of discernment and the Boolean lattice of propositions over them.
//!
//! A frame is a finite set of mutually exclusive atoms. A proposition is any
//! subset of the frame, stored as a bitmask, so meet/join/complement are plain
//! bit operations. Frames hold at most 64 atoms so a mask always fits in a
//! `u64`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Upper bound on the number of atoms in a frame, set by the `u64` bitmask.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum LatticeError {
    #[error("a frame needs at least one atom")]
    EmptyFrame,
    #[error("frame has {0} atoms, the maximum is {max}", max = MAX_ATOMS)]
    TooManyAtoms(usize),
    #[error("duplicate atom label {0:?}")]
    DuplicateAtom(String),
    #[error("atom labels must be non-empty")]
    EmptyLabel,
    #[error("label {0:?} does not name an atom of the frame")]
    UnknownLabel(String),
    #[error("propositions belong to different frames")]
    FrameMismatch,
}

/// A frame of discernment: an ordered list of unique, non-empty atom labels.
///
/// Cloning a frame is cheap (shared storage) and two frames compare equal
/// when their atom lists are equal.
#[derive(Clone)]
pub struct Frame {
    atoms: Arc<Vec<String>>,
}

impl Frame {
    pub fn new<I, S>(atoms: I) -> Result<Frame, LatticeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(LatticeError::EmptyFrame);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(LatticeError::TooManyAtoms(atoms.len()));
        }
        for (i, label) in atoms.iter().enumerate() {
            if label.is_empty() {
                return Err(LatticeError::EmptyLabel);
            }
            if atoms[..i].contains(label) {
                return Err(LatticeError::DuplicateAtom(label.clone()));
            }
        }
        Ok(Frame {
            atoms: Arc::new(atoms),
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Bitmask with one bit set per atom of the frame.
    pub fn universe_mask(&self) -> u64 {
        if self.atoms.len() == MAX_ATOMS {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    /// The impossible proposition, the bottom of the lattice.
    pub fn empty(&self) -> Proposition {
        Proposition {
            frame: self.clone(),
            bits: 0,
        }
    }

    /// The sure proposition covering the whole frame, the top of the lattice.
    pub fn universe(&self) -> Proposition {
        Proposition {
            frame: self.clone(),
            bits: self.universe_mask(),
        }
    }

    /// The singleton proposition for one atom label.
    pub fn atom(&self, label: &str) -> Result<Proposition, LatticeError> {
        let pos = self
            .atoms
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))?;
        Ok(Proposition {
            frame: self.clone(),
            bits: 1u64 << pos,
        })
    }

    /// Parses a list of atom labels into the proposition holding exactly
    /// those atoms. The empty list parses to the empty proposition.
    /// Duplicate labels are tolerated.
    pub fn proposition<'a, I>(&self, labels: I) -> Result<Proposition, LatticeError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = 0u64;
        for label in labels {
            bits |= self.atom(label)?.bits;
        }
        Ok(Proposition {
            frame: self.clone(),
            bits,
        })
    }

    pub(crate) fn proposition_from_bits(&self, bits: u64) -> Proposition {
        debug_assert_eq!(bits & !self.universe_mask(), 0);
        Proposition {
            frame: self.clone(),
            bits,
        }
    }

    /// All propositions of the frame in increasing bitmask order, from the
    /// empty set to the universe. Meant for small frames; the sequence has
    /// 2^n entries.
    pub fn propositions(&self) -> impl Iterator<Item = Proposition> + '_ {
        let last = self.universe_mask();
        let mut next: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let bits = next?;
            next = if bits == last { None } else { Some(bits + 1) };
            Some(Proposition {
                frame: self.clone(),
                bits,
            })
        })
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.atoms, &other.atoms) || self.atoms == other.atoms
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame({:?})", self.atoms)
    }
}

/// A subset of a frame's atoms, tied to its frame.
///
/// The canonical text form lists member atoms in frame order joined by `|`;
/// the empty proposition prints as the empty string. Propositions are
/// ordered by their bitmask value, which fixes a deterministic iteration
/// order everywhere masses or tallies are reported.
#[derive(Clone)]
pub struct Proposition {
    frame: Frame,
    bits: u64,
}

impl Proposition {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_universe(&self) -> bool {
        self.bits == self.frame.universe_mask()
    }

    /// Number of atoms the proposition contains.
    pub fn atom_count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Labels of the member atoms in frame order.
    pub fn labels(&self) -> Vec<&str> {
        self.frame
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| self.bits >> i & 1 == 1)
            .map(|(_, a)| a.as_str())
            .collect()
    }

    /// Greatest lower bound: the intersection of the two subsets.
    pub fn meet(&self, other: &Proposition) -> Result<Proposition, LatticeError> {
        if self.frame != other.frame {
            return Err(LatticeError::FrameMismatch);
        }
        Ok(Proposition {
            frame: self.frame.clone(),
            bits: self.bits & other.bits,
        })
    }

    /// Least upper bound: the union of the two subsets.
    pub fn join(&self, other: &Proposition) -> Result<Proposition, LatticeError> {
        if self.frame != other.frame {
            return Err(LatticeError::FrameMismatch);
        }
        Ok(Proposition {
            frame: self.frame.clone(),
            bits: self.bits | other.bits,
        })
    }

    /// Set complement relative to the frame.
    pub fn complement(&self) -> Proposition {
        Proposition {
            frame: self.frame.clone(),
            bits: !self.bits & self.frame.universe_mask(),
        }
    }

    pub fn is_subset_of(&self, other: &Proposition) -> bool {
        self.frame == other.frame && self.bits & !other.bits == 0
    }

    pub fn intersects(&self, other: &Proposition) -> bool {
        self.frame == other.frame && self.bits & other.bits != 0
    }
}

impl PartialEq for Proposition {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.frame == other.frame
    }
}

impl Eq for Proposition {}

impl PartialOrd for Proposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Proposition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .cmp(&other.bits)
            .then_with(|| self.frame.atoms.cmp(&other.frame.atoms))
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels().join("|"))
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Proposition({})", self)
    }
}
