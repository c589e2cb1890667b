// Results grid: listing -> card view model -> DOM.

import { BUCKET_COLORS } from './overlay.js';
import { Listing } from './types.js';

export interface CardModel {
  propertyId: string;
  price: string;
  facts: string;
  address: string;
  badge: { label: string; color: string; title: string } | null;
}

const money = new Intl.NumberFormat('en-US', {
  style: 'currency',
  currency: 'USD',
  maximumFractionDigits: 0,
});

export function toCardModel(listing: Listing): CardModel {
  const facts = [
    listing.rooms !== null ? `${listing.rooms}bed` : null,
    listing.baths !== null ? `${listing.baths}bath` : null,
    listing.sqft !== null ? `${listing.sqft.toLocaleString('en-US')}sqft` : null,
    listing.build_year !== null ? `built ${listing.build_year}` : null,
  ]
    .filter(Boolean)
    .join(' ');
  return {
    propertyId: listing.property_id,
    price: listing.price !== null ? money.format(listing.price) : 'price on request',
    facts,
    address: listing.address,
    badge: listing.damage
      ? {
          label: listing.damage.label,
          color: BUCKET_COLORS[listing.damage.label] ?? '#888',
          title: `damage score ${listing.damage.score.toFixed(4)}`,
        }
      : null,
  };
}

/** Replace the container's content with one card per listing, API order. */
export function renderResults(
  container: HTMLElement,
  listings: Listing[],
  onShowDamage?: (propertyId: string) => void,
): void {
  container.textContent = '';
  if (listings.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No listings match these filters.';
    container.appendChild(empty);
    return;
  }
  for (const listing of listings) {
    const model = toCardModel(listing);
    const card = document.createElement('article');
    card.className = 'card';
    card.dataset.propertyId = model.propertyId;

    const header = document.createElement('div');
    header.className = 'card-header';
    const price = document.createElement('span');
    price.className = 'price';
    price.textContent = `${model.propertyId}: ${model.price}`;
    header.appendChild(price);
    if (model.badge) {
      const badge = document.createElement('span');
      badge.className = 'badge';
      badge.textContent = model.badge.label;
      badge.title = model.badge.title;
      badge.style.backgroundColor = model.badge.color;
      header.appendChild(badge);
    }
    card.appendChild(header);

    const facts = document.createElement('p');
    facts.className = 'facts';
    facts.textContent = model.facts;
    card.appendChild(facts);

    const address = document.createElement('p');
    address.className = 'address';
    address.textContent = model.address;
    card.appendChild(address);

    const button = document.createElement('button');
    button.className = 'show-damage';
    button.type = 'button';
    button.textContent = 'Show damage in detail';
    button.addEventListener('click', () => onShowDamage?.(model.propertyId));
    card.appendChild(button);

    container.appendChild(card);
  }
}
