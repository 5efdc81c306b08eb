"""defmine: mine commonsense knowledge triples from dictionary term definitions.

The package is organised as a pipeline: reference-KG and definition corpora are
parsed (:mod:`defmine.corpus`), concept phrases are POS-tagged
(:mod:`defmine.tagging`), frequent per-relation tag patterns are mined
(:mod:`defmine.patterns`) and matched against definition text to build
candidate triples (:mod:`defmine.extraction`).  Candidates are scored by a
bilinear plausibility model, a PMI combiner or external score files
(:mod:`defmine.bilinear`, :mod:`defmine.scoring`), checked for novelty against
reference graphs (:mod:`defmine.novelty`) and analysed
(:mod:`defmine.analysis`).  A CLI (:mod:`defmine.cli`) orchestrates runs and an
HTTP service (:mod:`defmine.service`) collects human validity/novelty labels.
"""

__version__ = "0.1.0"
