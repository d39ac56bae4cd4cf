from .algebra import FiniteHeytingAlgebra, FinitePoset, Filter, Homomorphism, catalog, chain, boolean, from_order, from_poset
from .density import KMAlgebra, delta_min, km_from_heyting
from .enrichment import one_step, free_one_generator, extend_hom, commute_iso, km_completion
from .formats import load_algebra
