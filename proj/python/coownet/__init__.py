"""Co-ownership network analysis: bipartite projection, Louvain community
detection over seeded ensembles, configuration-model nulls, and Monte-Carlo
chi-square tests of community/business-group association."""

from coownet._core import *  # noqa: F401,F403
from coownet._core import __version__  # noqa: F401
