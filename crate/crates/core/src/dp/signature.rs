use std::fmt;

use smallvec::SmallVec;

use super::partition::Elem;

/// Role of a bag vertex in a partial solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// A path consisting of this vertex alone.
    Zero,
    /// Endpoint of a path with at least one edge.
    End,
    /// Inner vertex of a path.
    Inner,
    /// Permitted neighbor of the paths.
    Neighbor,
}

impl Role {
    pub fn on_path(self) -> bool {
        !matches!(self, Role::Neighbor)
    }
}

/// DP state at a bag: roles of the assigned bag vertices and the load budget.
/// Vertices without a role are untouched.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreSignature {
    roles: SmallVec<[(Elem, Role); 8]>,
    pub l: u32,
}

impl fmt::Debug for PreSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sig{{")?;
        for (v, r) in &self.roles {
            let c = match r {
                Role::Zero => 'z',
                Role::End => 'e',
                Role::Inner => 'i',
                Role::Neighbor => 'n',
            };
            write!(f, "{v}{c} ")?;
        }
        write!(f, "l={}}}", self.l)
    }
}

impl PreSignature {
    pub fn new(l: u32) -> Self {
        PreSignature {
            roles: SmallVec::new(),
            l,
        }
    }

    pub fn from_roles<I: IntoIterator<Item = (Elem, Role)>>(roles: I, l: u32) -> Self {
        let mut roles: SmallVec<[(Elem, Role); 8]> = roles.into_iter().collect();
        roles.sort_unstable();
        debug_assert!(roles.windows(2).all(|w| w[0].0 != w[1].0));
        PreSignature { roles, l }
    }

    pub fn role(&self, v: Elem) -> Option<Role> {
        self.roles
            .binary_search_by_key(&v, |x| x.0)
            .ok()
            .map(|i| self.roles[i].1)
    }

    pub fn roles(&self) -> &[(Elem, Role)] {
        &self.roles
    }

    /// Copy with `v`'s role replaced (`None` clears it).
    pub fn with(&self, v: Elem, role: Option<Role>) -> Self {
        let mut out = self.clone();
        out.set(v, role);
        out
    }

    pub fn set(&mut self, v: Elem, role: Option<Role>) {
        match (self.roles.binary_search_by_key(&v, |x| x.0), role) {
            (Ok(i), Some(r)) => self.roles[i].1 = r,
            (Ok(i), None) => {
                self.roles.remove(i);
            }
            (Err(i), Some(r)) => self.roles.insert(i, (v, r)),
            (Err(_), None) => {}
        }
    }

    pub fn with_l(&self, l: u32) -> Self {
        PreSignature {
            roles: self.roles.clone(),
            l,
        }
    }

    /// Path endpoints, the universe of the cell's matchings.
    pub fn ends(&self) -> SmallVec<[Elem; 8]> {
        self.members(Role::End)
    }

    pub fn members(&self, role: Role) -> SmallVec<[Elem; 8]> {
        self.roles
            .iter()
            .filter(|x| x.1 == role)
            .map(|x| x.0)
            .collect()
    }
}
