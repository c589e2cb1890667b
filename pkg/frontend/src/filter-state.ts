// Filter panel state, kept in sync with the URL query string so searches
// are shareable. Parsing sanitizes every field, so any URL (hand-edited
// included) still round-trips into a query the API accepts.

export type DamageMode = 'exact' | 'at_most_severe' | 'at_least_good';
export type SortKey = 'price_asc' | 'price_desc' | 'damage_asc' | 'damage_desc';

export interface FilterState {
  priceMin: number | null;
  priceMax: number | null;
  roomsMin: number | null;
  location: string;
  damageMode: DamageMode;
  damageLevel: string | null; // severe | mild | minor | none, null = any
  sort: SortKey;
  page: number;
  pageSize: number;
}

export const DEFAULT_FILTERS: FilterState = {
  priceMin: null,
  priceMax: null,
  roomsMin: null,
  location: '',
  damageMode: 'exact',
  damageLevel: null,
  sort: 'price_asc',
  page: 1,
  pageSize: 20,
};

const SORT_KEYS: SortKey[] = ['price_asc', 'price_desc', 'damage_asc', 'damage_desc'];
const MODES: DamageMode[] = ['exact', 'at_most_severe', 'at_least_good'];

// "extreme" is the UI's historical name for the severe level
const LEVEL_ALIASES: Record<string, string> = {
  severe: 'severe',
  extreme: 'severe',
  mild: 'mild',
  minor: 'minor',
  none: 'none',
  'no damage': 'none',
};

export function normalizeLevel(raw: string | null): string | null {
  if (!raw) return null;
  return LEVEL_ALIASES[raw.trim().toLowerCase()] ?? null;
}

function parseNumber(raw: string | null): number | null {
  if (raw === null || raw.trim() === '') return null;
  const value = Number(raw);
  return Number.isFinite(value) && value >= 0 ? value : null;
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

/** Parse a URL query string (or URLSearchParams) into a valid FilterState. */
export function fromSearchParams(search: string | URLSearchParams): FilterState {
  const params = typeof search === 'string' ? new URLSearchParams(search) : search;
  let priceMin = parseNumber(params.get('price_min'));
  let priceMax = parseNumber(params.get('price_max'));
  if (priceMin !== null && priceMax !== null && priceMin > priceMax) {
    [priceMin, priceMax] = [priceMax, priceMin];
  }
  const sortRaw = params.get('sort') as SortKey | null;
  const modeRaw = params.get('damage_mode') as DamageMode | null;
  const pageRaw = parseNumber(params.get('page'));
  const pageSizeRaw = parseNumber(params.get('page_size'));
  return {
    priceMin,
    priceMax,
    roomsMin: parseNumber(params.get('rooms_min')),
    location: (params.get('location') ?? '').trim(),
    damageMode: modeRaw && MODES.includes(modeRaw) ? modeRaw : DEFAULT_FILTERS.damageMode,
    damageLevel: normalizeLevel(params.get('damage_level')),
    sort: sortRaw && SORT_KEYS.includes(sortRaw) ? sortRaw : DEFAULT_FILTERS.sort,
    page: pageRaw !== null ? Math.max(1, Math.round(pageRaw)) : 1,
    pageSize: pageSizeRaw !== null ? clamp(Math.round(pageSizeRaw), 1, 100) : DEFAULT_FILTERS.pageSize,
  };
}

/** Serialize to URL params, leaving defaults out to keep links short. */
export function toSearchParams(state: FilterState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.priceMin !== null) params.set('price_min', String(state.priceMin));
  if (state.priceMax !== null) params.set('price_max', String(state.priceMax));
  if (state.roomsMin !== null) params.set('rooms_min', String(state.roomsMin));
  if (state.location) params.set('location', state.location);
  if (state.damageLevel) {
    params.set('damage_level', state.damageLevel);
    if (state.damageMode !== DEFAULT_FILTERS.damageMode) {
      params.set('damage_mode', state.damageMode);
    }
  }
  if (state.sort !== DEFAULT_FILTERS.sort) params.set('sort', state.sort);
  if (state.page !== 1) params.set('page', String(state.page));
  if (state.pageSize !== DEFAULT_FILTERS.pageSize) params.set('page_size', String(state.pageSize));
  return params;
}

/** Query string for GET /properties. Damage params only travel together. */
export function toApiQuery(state: FilterState): string {
  const params = new URLSearchParams();
  if (state.priceMin !== null) params.set('price_min', String(state.priceMin));
  if (state.priceMax !== null) params.set('price_max', String(state.priceMax));
  if (state.roomsMin !== null) params.set('rooms_min', String(state.roomsMin));
  if (state.location) params.set('location', state.location);
  if (state.damageLevel) {
    params.set('damage_mode', state.damageMode);
    params.set('damage_level', state.damageLevel);
  }
  params.set('sort', state.sort);
  params.set('page', String(state.page));
  params.set('page_size', String(state.pageSize));
  return params.toString();
}
