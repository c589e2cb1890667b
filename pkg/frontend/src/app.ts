// Page wiring: filter panel <-> URL <-> API <-> results grid, plus the
// damage overlay viewer.

import { ApiClient, AssessmentPending, StaleGuard } from './api.js';
import {
  DEFAULT_FILTERS,
  FilterState,
  fromSearchParams,
  normalizeLevel,
  toSearchParams,
} from './filter-state.js';
import { displayScale, drawOverlays } from './overlay.js';
import { renderResults } from './results.js';
import { DamageDetail } from './types.js';

const API_BASE = (window as { DAMAGESEARCH_API?: string }).DAMAGESEARCH_API ?? '';
const VIEWER_WIDTH = 560;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function startApp(): void {
  const client = new ApiClient(API_BASE);
  const guard = new StaleGuard();

  const priceMin = el<HTMLInputElement>('price-min');
  const priceMax = el<HTMLInputElement>('price-max');
  const roomsMin = el<HTMLInputElement>('rooms-min');
  const location = el<HTMLInputElement>('location');
  const damageLevel = el<HTMLSelectElement>('damage-level');
  const damageMode = el<HTMLSelectElement>('damage-mode');
  const sort = el<HTMLSelectElement>('sort');
  const status = el<HTMLElement>('status');
  const results = el<HTMLElement>('results');
  const viewer = el<HTMLElement>('viewer');

  let state = fromSearchParams(window.location.search);

  function writeForm(): void {
    priceMin.value = state.priceMin?.toString() ?? '';
    priceMax.value = state.priceMax?.toString() ?? '';
    roomsMin.value = state.roomsMin?.toString() ?? '';
    location.value = state.location;
    damageLevel.value = state.damageLevel ?? '';
    damageMode.value = state.damageMode;
    damageMode.disabled = state.damageLevel === null;
    sort.value = state.sort;
  }

  function readForm(): FilterState {
    return {
      ...DEFAULT_FILTERS,
      priceMin: priceMin.value ? Number(priceMin.value) : null,
      priceMax: priceMax.value ? Number(priceMax.value) : null,
      roomsMin: roomsMin.value ? Number(roomsMin.value) : null,
      location: location.value.trim(),
      damageLevel: normalizeLevel(damageLevel.value || null),
      damageMode: (damageMode.value || 'exact') as FilterState['damageMode'],
      sort: sort.value as FilterState['sort'],
    };
  }

  function pushUrl(): void {
    const query = toSearchParams(state).toString();
    const url = query ? `${window.location.pathname}?${query}` : window.location.pathname;
    history.pushState(null, '', url);
  }

  async function refresh(): Promise<void> {
    const ticket = guard.issue();
    status.textContent = 'Searching...';
    try {
      const response = await client.search(state);
      if (!guard.isCurrent(ticket)) return; // a newer query overtook this one
      status.textContent = `${response.total} listing${response.total === 1 ? '' : 's'}`;
      renderResults(results, response.items, showDamage);
    } catch (error) {
      if (!guard.isCurrent(ticket)) return;
      status.textContent = `Search failed: ${(error as Error).message}`;
    }
  }

  function applyFormChange(): void {
    state = fromSearchParams(toSearchParams(readForm())); // sanitize round trip
    writeForm();
    pushUrl();
    void refresh();
  }

  for (const input of [priceMin, priceMax, roomsMin, location, damageLevel, damageMode, sort]) {
    input.addEventListener('change', applyFormChange);
  }

  window.addEventListener('popstate', () => {
    state = fromSearchParams(window.location.search);
    writeForm();
    void refresh();
  });

  async function showDamage(propertyId: string): Promise<void> {
    viewer.textContent = '';
    viewer.classList.add('open');
    const notice = document.createElement('p');
    notice.className = 'viewer-status spinner';
    notice.textContent = `Loading damage detail for ${propertyId}...`;
    viewer.appendChild(notice);
    try {
      const detail = await client.damageDetail(propertyId);
      renderViewer(detail);
    } catch (error) {
      if (error instanceof AssessmentPending) {
        notice.textContent =
          `Estimating damage for ${propertyId}... ` +
          `${error.taskIds.length} image(s) queued for detection. Try again shortly.`;
        return;
      }
      notice.classList.remove('spinner');
      notice.textContent = `Could not load damage detail: ${(error as Error).message}`;
    }
  }

  function renderViewer(detail: DamageDetail): void {
    viewer.textContent = '';
    const heading = document.createElement('h2');
    heading.textContent =
      `${detail.property_id} — damage ${detail.bucket.label} ` +
      `(score ${detail.score.toFixed(4)})${detail.partial ? ', partial coverage' : ''}`;
    viewer.appendChild(heading);

    const close = document.createElement('button');
    close.type = 'button';
    close.className = 'close-viewer';
    close.textContent = 'Close';
    close.addEventListener('click', () => {
      viewer.classList.remove('open');
      viewer.textContent = '';
    });
    viewer.appendChild(close);

    const total = detail.images.reduce((n, image) => n + image.detections.length, 0);
    if (total === 0) {
      const clean = document.createElement('p');
      clean.className = 'viewer-status';
      clean.textContent = 'No damage found in this property’s photos.';
      viewer.appendChild(clean);
    }

    for (const image of detail.images) {
      const figure = document.createElement('figure');
      const caption = document.createElement('figcaption');
      caption.textContent = `${image.image_id} — ${image.section_kind ?? 'unclassified'}`;
      const canvas = document.createElement('canvas');
      const scale = displayScale(image.width || VIEWER_WIDTH, VIEWER_WIDTH);
      canvas.width = Math.round((image.width || VIEWER_WIDTH) * scale);
      canvas.height = Math.round((image.height || VIEWER_WIDTH) * scale);
      figure.appendChild(caption);
      figure.appendChild(canvas);
      viewer.appendChild(figure);

      const ctx = canvas.getContext('2d');
      if (!ctx) continue;
      const photo = new Image();
      photo.onload = () => {
        ctx.drawImage(photo, 0, 0, canvas.width, canvas.height);
        drawOverlays(ctx, image.detections, scale);
      };
      photo.onerror = () => {
        // fixture corpora ship geometry without pixels; draw on a plain card
        ctx.fillStyle = '#e8e4dc';
        ctx.fillRect(0, 0, canvas.width, canvas.height);
        drawOverlays(ctx, image.detections, scale);
      };
      photo.src = `${API_BASE}/${image.file_path}`;
    }
  }

  writeForm();
  void refresh();
}

startApp();
