//! Decision outcomes with optional certificates.

/// A YES answer carries a witness that can be checked independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Yes(W),
    No,
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Yes(w) => Some(w),
            Verdict::No => None,
        }
    }
}
