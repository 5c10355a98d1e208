# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""
Orbicoh computes the integral cohomology of torus orbifolds.

Given a face poset and a characteristic function, or a complete simplicial fan, it
reports the groups with closed formulas and decides for each prime whether the
cohomology can have p-torsion.
"""

from importlib.metadata import version

__version__ = version("orbicoh")
