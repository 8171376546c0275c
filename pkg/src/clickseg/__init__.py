"""Click-point weak labels for binary segmentation.

Turns single-pixel click annotations into full masks (flood fill over a
binarized/skeletonized/closed barrier, or seeded region growing), augments
image/label pairs, and scores predictions against ground truth with
agreement metrics and grading scales.
"""

__version__ = "0.1.0"
