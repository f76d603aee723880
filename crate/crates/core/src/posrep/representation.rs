//! Representations of a free group by their generator images.

use serde::{Deserialize, Serialize};

use super::{so_inverse, GroupElement, RepError, SymPower};
use crate::flags::JForm;
use crate::freegroup::{Letter, SchottkyData, SchottkyFile, Word};
use crate::numcore::{mat_from_entries, mat_to_entries, Mat, MatEntries, Scalar, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "fuchsian-sym")]
    FuchsianSym,
    #[serde(rename = "user-supplied")]
    UserSupplied,
}

#[derive(Clone, Debug)]
pub struct Representation<T> {
    form: JForm,
    gens: Vec<GroupElement<T>>,
    inverses: Vec<Mat<T>>,
    provenance: Provenance,
}

impl<T: Scalar> Representation<T> {
    pub fn from_matrices(n: usize, mats: Vec<Mat<T>>, provenance: Provenance, tol: &Tolerance) -> Result<Self, RepError> {
        let form = JForm::new(n)?;
        if mats.is_empty() {
            return Err(RepError::Invalid("no generators".into()));
        }
        let gens = mats
            .into_iter()
            .map(|m| GroupElement::certify(m, &form, tol))
            .collect::<Result<Vec<_>, _>>()?;
        let inverses = gens.iter().map(|g| so_inverse(g.matrix(), &form)).collect();
        Ok(Representation {
            form,
            gens,
            inverses,
            provenance,
        })
    }

    /// Restriction of the symmetric-power representation to the Schottky group.
    pub fn fuchsian(s: &SchottkyData<T>, n: usize, tol: &Tolerance) -> Result<Self, RepError> {
        let sym = SymPower::new(n)?;
        let mats = s
            .generators()
            .iter()
            .map(|g| sym.image(g))
            .collect::<Result<Vec<_>, _>>()?;
        Representation::from_matrices(n, mats, Provenance::FuchsianSym, tol)
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn form(&self) -> &JForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn generator(&self, i: usize) -> &GroupElement<T> {
        &self.gens[i]
    }

    pub fn letter_image(&self, l: Letter) -> &Mat<T> {
        if l.inverse {
            &self.inverses[l.gen]
        } else {
            self.gens[l.gen].matrix()
        }
    }

    pub fn image(&self, w: &Word) -> Mat<T> {
        w.letters()
            .iter()
            .fold(Mat::identity(self.dim()), |acc, &l| acc.mul(self.letter_image(l)))
    }

    pub fn inverse_image(&self, m: &Mat<T>) -> Mat<T> {
        so_inverse(m, &self.form)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Result<Representation<U>, RepError> {
        Representation::from_matrices(
            self.n(),
            self.gens.iter().map(|g| g.matrix().map(f)).collect(),
            self.provenance,
            &Tolerance::default(),
        )
    }

    pub fn to_file(&self) -> RepFile {
        RepFile {
            n: self.n(),
            provenance: self.provenance,
            generators: self.gens.iter().map(|g| mat_to_entries(g.matrix())).collect(),
            boundary_flags: Vec::new(),
            schottky: None,
        }
    }

    pub fn from_file(file: &RepFile, tol: &Tolerance) -> Result<Self, RepError> {
        let mats = file
            .generators
            .iter()
            .map(|m| mat_from_entries(m).map_err(RepError::Invalid))
            .collect::<Result<Vec<_>, _>>()?;
        Representation::from_matrices(file.n, mats, file.provenance, tol)
    }
}

/// One cached boundary flag: wall (`"a1+"`), endpoint (`"+"` or `"-"`), basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagEntry {
    pub arc: String,
    pub end: String,
    pub basis: MatEntries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub n: usize,
    pub provenance: Provenance,
    pub generators: Vec<MatEntries>,
    #[serde(default)]
    pub boundary_flags: Vec<FlagEntry>,
    /// Schottky data the arc system is read from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schottky: Option<SchottkyFile>,
}
