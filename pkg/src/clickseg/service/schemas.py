"""Request and response payloads for the annotation service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..weaklabel import DEFAULT_LEAK_RATIO, FloodFillParams, RegionGrowParams


class Seed(BaseModel):
    row: int = Field(ge=0)
    col: int = Field(ge=0)


class FloodParams(BaseModel):
    """Wire form of the flood-fill parameters; threshold null means auto."""

    threshold: Optional[int] = Field(default=128, ge=0, le=255)
    closing_radius: int = Field(default=1, ge=0)

    def to_domain(self) -> FloodFillParams:
        return FloodFillParams(threshold=self.threshold, closing_radius=self.closing_radius)


class RgParams(BaseModel):
    stop_threshold: float = Field(default=10.0, ge=0)

    def to_domain(self) -> RegionGrowParams:
        return RegionGrowParams(stop_threshold=self.stop_threshold)


class CreateProjectRequest(BaseModel):
    name: str


class ProjectInfo(BaseModel):
    name: str
    image_count: int
    dirty: bool


class ImageInfo(BaseModel):
    image_id: str
    path: str
    height: int
    width: int


class SeedsUpdate(BaseModel):
    project: str
    image_id: str
    seeds: list[Seed]


class SeedsUpdateResponse(BaseModel):
    image_id: str
    seed_count: int
    dirty: bool


class PreviewRequest(BaseModel):
    project: str
    image_id: str
    seeds: list[Seed]
    method: Literal["flood", "rg"] = "flood"
    flood_params: FloodParams = FloodParams()
    rg_params: RgParams = RgParams()
    leak_ratio: float = Field(default=DEFAULT_LEAK_RATIO, gt=0, le=1)
    max_pixels: Optional[int] = Field(default=None, ge=1)


class SeedDiagnostic(BaseModel):
    row: int
    col: int
    status: str
    region_size: int


class PreviewResponse(BaseModel):
    mask_png_base64: str
    diagnostics: list[SeedDiagnostic]
    partial: bool
    height: int
    width: int


class SaveRequest(BaseModel):
    project: str


class SaveResponse(BaseModel):
    saved: bool
    document: str
    masks: list[str]
