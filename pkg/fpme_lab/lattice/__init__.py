from fpme_lab.lattice.config import LatticeConfig, all_configurations, reduce_site

__all__ = ["LatticeConfig", "all_configurations", "reduce_site"]
