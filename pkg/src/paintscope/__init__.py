"""Quantitative analyses of human annotations on digitized paintings.

Subpackages by concern: model (annotation documents and their canonical
JSON), stats (regression and t machinery), perspective (size-gradient
viewpoint heights), shadows (vanishing-angle fits), eyelights (highlight
tilt analyses), faces (category statistics and composites), synth
(ground-truth generators), corpus (directory layout), reports (CSV
builders), cli and service (entry points).
"""

__version__ = "0.1.0"
