use std::fmt;
use std::str::FromStr;

/// Mobility event marking a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Annotation {
    StopStart,
    StopEnd,
    SlowMotionStart,
    SlowMotionEnd,
    ChangeInHeading,
    SpeedChangeStart,
    SpeedChangeEnd,
    GapStart,
    GapEnd,
    TrackStart,
    TrackEnd,
}

impl Annotation {
    pub const ALL: [Annotation; 11] = [
        Annotation::StopStart,
        Annotation::StopEnd,
        Annotation::SlowMotionStart,
        Annotation::SlowMotionEnd,
        Annotation::ChangeInHeading,
        Annotation::SpeedChangeStart,
        Annotation::SpeedChangeEnd,
        Annotation::GapStart,
        Annotation::GapEnd,
        Annotation::TrackStart,
        Annotation::TrackEnd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Annotation::StopStart => "stopStart",
            Annotation::StopEnd => "stopEnd",
            Annotation::SlowMotionStart => "slowMotionStart",
            Annotation::SlowMotionEnd => "slowMotionEnd",
            Annotation::ChangeInHeading => "changeInHeading",
            Annotation::SpeedChangeStart => "speedChangeStart",
            Annotation::SpeedChangeEnd => "speedChangeEnd",
            Annotation::GapStart => "gapStart",
            Annotation::GapEnd => "gapEnd",
            Annotation::TrackStart => "trackStart",
            Annotation::TrackEnd => "trackEnd",
        }
    }

    fn bit(self) -> u16 {
        1 << self as u8
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Annotation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Annotation::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| format!("unknown annotation `{s}`"))
    }
}

/// Set of annotations carried by one critical point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AnnotationSet(u16);

impl AnnotationSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn insert(&mut self, a: Annotation) {
        self.0 |= a.bit();
    }

    pub fn contains(self, a: Annotation) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Annotation> {
        Annotation::ALL.into_iter().filter(move |a| self.contains(*a))
    }

    /// Labels in lexicographic order.
    pub fn sorted_labels(self) -> Vec<&'static str> {
        let mut labels: Vec<_> = self.iter().map(Annotation::label).collect();
        labels.sort_unstable();
        labels
    }

    /// Parses a `|`-separated label list.
    pub fn parse(s: &str) -> Result<Self, String> {
        s.split('|')
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()
    }
}

impl FromIterator<Annotation> for AnnotationSet {
    fn from_iter<I: IntoIterator<Item = Annotation>>(iter: I) -> Self {
        let mut set = Self::empty();
        for a in iter {
            set.insert(a);
        }
        set
    }
}

impl fmt::Display for AnnotationSet {
    /// `|`-joined labels, sorted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sorted_labels().join("|"))
    }
}

impl fmt::Debug for AnnotationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
