//! The configuration-statistic registry.
//!
//! Naming follows the A/X/B convention: A is the bottom one-mode network
//! (social ties Y), X the cross-level bipartite network (affiliations W), and
//! B the top one-mode network (the fixed pair graph Q). Alternating
//! statistics carry a damping parameter lambda > 1 (default 2).

use serde::{Deserialize, Serialize};

use crate::error::StatError;

pub const DEFAULT_LAMBDA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    // One-mode statistics on Y.
    EdgeA,
    Star2A,
    Star3A,
    Star4A,
    Star5A,
    TriangleA,
    Cycle4A,
    IsolatesA,
    IsolateEdgesA,
    AltStarA,
    AltTriangleA,
    AltTwoPathA,
    AltEdgeTriangleA,
    // Bipartite statistics on W.
    XEdge,
    XStar2A,
    XStar2B,
    XStar3A,
    XStar3B,
    X3Path,
    X4Cycle,
    XAltStarA,
    XAltStarB,
    XAltCycleA,
    XAltCycleB,
    XEdgeCycleA,
    XEdgeCycleB,
    XAltEdgeCycleA,
    XAltEdgeCycleB,
    // Cross-level statistics combining W with Y.
    Star2AX,
    TriangleXAX,
    L3XAX,
    AltTriangleXAX,
    // Cross-level statistics combining W with Q.
    Star2BX,
    TriangleXBX,
    L3XBX,
    AltTriangleXBX,
    ExtTriangleB,
    ExtTriangleA,
    // Three-layer combinations.
    Cycle4AXB,
    L3AXB,
    AltStarAXB,
    AltCycle4AXB,
    // Criterion-graph interactions (colouring D).
    ExpertXEdgeB,
    ExpertStar2BX,
    XTriEdgeB,
    XC4ChordB,
}

pub const ALL_STATISTICS: [Statistic; 46] = [
    Statistic::EdgeA,
    Statistic::Star2A,
    Statistic::Star3A,
    Statistic::Star4A,
    Statistic::Star5A,
    Statistic::TriangleA,
    Statistic::Cycle4A,
    Statistic::IsolatesA,
    Statistic::IsolateEdgesA,
    Statistic::AltStarA,
    Statistic::AltTriangleA,
    Statistic::AltTwoPathA,
    Statistic::AltEdgeTriangleA,
    Statistic::XEdge,
    Statistic::XStar2A,
    Statistic::XStar2B,
    Statistic::XStar3A,
    Statistic::XStar3B,
    Statistic::X3Path,
    Statistic::X4Cycle,
    Statistic::XAltStarA,
    Statistic::XAltStarB,
    Statistic::XAltCycleA,
    Statistic::XAltCycleB,
    Statistic::XEdgeCycleA,
    Statistic::XEdgeCycleB,
    Statistic::XAltEdgeCycleA,
    Statistic::XAltEdgeCycleB,
    Statistic::Star2AX,
    Statistic::TriangleXAX,
    Statistic::L3XAX,
    Statistic::AltTriangleXAX,
    Statistic::Star2BX,
    Statistic::TriangleXBX,
    Statistic::L3XBX,
    Statistic::AltTriangleXBX,
    Statistic::ExtTriangleB,
    Statistic::ExtTriangleA,
    Statistic::Cycle4AXB,
    Statistic::L3AXB,
    Statistic::AltStarAXB,
    Statistic::AltCycle4AXB,
    Statistic::ExpertXEdgeB,
    Statistic::ExpertStar2BX,
    Statistic::XTriEdgeB,
    Statistic::XC4ChordB,
];

impl Statistic {
    /// Canonical registry name.
    pub fn name(self) -> &'static str {
        match self {
            Statistic::EdgeA => "EdgeA",
            Statistic::Star2A => "Star2A",
            Statistic::Star3A => "Star3A",
            Statistic::Star4A => "Star4A",
            Statistic::Star5A => "Star5A",
            Statistic::TriangleA => "TriangleA",
            Statistic::Cycle4A => "Cycle4A",
            Statistic::IsolatesA => "IsolatesA",
            Statistic::IsolateEdgesA => "IsolateEdgesA",
            Statistic::AltStarA => "ASA",
            Statistic::AltTriangleA => "ATA",
            Statistic::AltTwoPathA => "A2PA",
            Statistic::AltEdgeTriangleA => "AETA",
            Statistic::XEdge => "XEdge",
            Statistic::XStar2A => "XStar2A",
            Statistic::XStar2B => "XStar2B",
            Statistic::XStar3A => "XStar3A",
            Statistic::XStar3B => "XStar3B",
            Statistic::X3Path => "X3Path",
            Statistic::X4Cycle => "X4Cycle",
            Statistic::XAltStarA => "XASA",
            Statistic::XAltStarB => "XASB",
            Statistic::XAltCycleA => "XACA",
            Statistic::XAltCycleB => "XACB",
            Statistic::XEdgeCycleA => "XECA",
            Statistic::XEdgeCycleB => "XECB",
            Statistic::XAltEdgeCycleA => "XAECA",
            Statistic::XAltEdgeCycleB => "XAECB",
            Statistic::Star2AX => "Star2AX",
            Statistic::TriangleXAX => "TriangleXAX",
            Statistic::L3XAX => "L3XAX",
            Statistic::AltTriangleXAX => "ATXAX",
            Statistic::Star2BX => "Star2BX",
            Statistic::TriangleXBX => "TriangleXBX",
            Statistic::L3XBX => "L3XBX",
            Statistic::AltTriangleXBX => "ATXBX",
            Statistic::ExtTriangleB => "EXTB",
            Statistic::ExtTriangleA => "EXTA",
            Statistic::Cycle4AXB => "C4AXB",
            Statistic::L3AXB => "L3AXB",
            Statistic::AltStarAXB => "ASAXASB",
            Statistic::AltCycle4AXB => "AC4AXB",
            Statistic::ExpertXEdgeB => "Expert_XEdgeB",
            Statistic::ExpertStar2BX => "Expert_Star2BX",
            Statistic::XTriEdgeB => "XTriEdgeB",
            Statistic::XC4ChordB => "XC4ChordB",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, StatError> {
        ALL_STATISTICS
            .iter()
            .copied()
            .find(|s| s.name() == name || s.name() == name.replace(' ', "_"))
            .ok_or_else(|| StatError::UnknownStatistic(name.to_string()))
    }

    /// Does the statistic use the geometric damping parameter?
    pub fn is_alternating(self) -> bool {
        matches!(
            self,
            Statistic::AltStarA
                | Statistic::AltTriangleA
                | Statistic::AltTwoPathA
                | Statistic::AltEdgeTriangleA
                | Statistic::XAltStarA
                | Statistic::XAltStarB
                | Statistic::XAltCycleA
                | Statistic::XAltCycleB
                | Statistic::XAltEdgeCycleA
                | Statistic::XAltEdgeCycleB
                | Statistic::AltTriangleXAX
                | Statistic::AltTriangleXBX
                | Statistic::AltStarAXB
                | Statistic::AltCycle4AXB
        )
    }
}

/// A registry statistic together with its damping parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticId {
    pub stat: Statistic,
    pub lambda: f64,
}

impl StatisticId {
    pub fn new(stat: Statistic) -> Self {
        StatisticId {
            stat,
            lambda: DEFAULT_LAMBDA,
        }
    }

    pub fn with_lambda(stat: Statistic, lambda: f64) -> Result<Self, StatError> {
        if stat.is_alternating() && lambda <= 1.0 {
            return Err(StatError::BadLambda(lambda));
        }
        Ok(StatisticId { stat, lambda })
    }

    pub fn parse(name: &str, lambda: Option<f64>) -> Result<Self, StatError> {
        let stat = Statistic::from_name(name)?;
        match lambda {
            Some(l) => StatisticId::with_lambda(stat, l),
            None => Ok(StatisticId::new(stat)),
        }
    }

    pub fn name(&self) -> &'static str {
        self.stat.name()
    }
}

/// Values in requested order.
#[derive(Debug, Clone, PartialEq)]
pub struct StatVector {
    entries: Vec<(StatisticId, f64)>,
}

impl StatVector {
    pub fn new(entries: Vec<(StatisticId, f64)>) -> Self {
        StatVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|&(_, v)| v).collect()
    }

    pub fn entries(&self) -> &[(StatisticId, f64)] {
        &self.entries
    }

    pub fn get(&self, stat: Statistic) -> Option<f64> {
        self.entries
            .iter()
            .find(|(id, _)| id.stat == stat)
            .map(|&(_, v)| v)
    }
}

/// Serialized form used by CLI spec files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatRequest {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl StatRequest {
    pub fn resolve(&self) -> Result<StatisticId, StatError> {
        StatisticId::parse(&self.name, self.lambda)
    }
}
