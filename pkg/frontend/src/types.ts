// Shapes returned by the listing search API.

export interface DamageInfo {
  score: number;
  class_id: number;
  label: string;
}

export interface Listing {
  property_id: string;
  address: string;
  zip_code: string;
  build_year: number | null;
  price: number | null;
  rooms: number | null;
  baths: number | null;
  sqft: number | null;
  damage: DamageInfo | null;
  thumbnail_image_ids: string[];
}

export interface SearchResponse {
  items: Listing[];
  total: number;
  page: number;
  page_size: number;
}

export interface OverlayDetection {
  detection_id: string;
  class_id: number;
  label: string;
  confidence: number;
  component_kind: string | null;
  bbox: [number, number, number, number];
  polygon: { all_points_x: number[]; all_points_y: number[] };
}

export interface OverlayImage {
  image_id: string;
  file_path: string;
  width: number;
  height: number;
  section_kind: string | null;
  detections: OverlayDetection[];
}

export interface DamageDetail {
  property_id: string;
  score: number;
  bucket: { class_id: number; label: string };
  partial: boolean;
  images: OverlayImage[];
}
