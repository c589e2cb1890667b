import { describe, expect, it } from 'vitest';

import { renderResults, toCardModel } from '../src/results.js';
import { Listing } from '../src/types.js';

function listing(id: string, price: number, label: string | null, score = 1.0): Listing {
  return {
    property_id: id,
    address: `${id} Test St, Columbus, OH 43207`,
    zip_code: '43207',
    build_year: 1947,
    price,
    rooms: 3,
    baths: 1,
    sqft: 1020,
    damage: label ? { score, class_id: 1, label } : null,
    thumbnail_image_ids: [`${id}-img1`],
  };
}

describe('toCardModel', () => {
  it('formats price, facts, and damage badge', () => {
    const model = toCardModel(listing('P4', 54000, 'severe'));
    expect(model.price).toBe('$54,000');
    expect(model.facts).toBe('3bed 1bath 1,020sqft built 1947');
    expect(model.badge?.label).toBe('severe');
    expect(model.badge?.title).toContain('1.0000');
  });

  it('omits the badge while unassessed', () => {
    expect(toCardModel(listing('P9', 1000, null)).badge).toBeNull();
  });
});

describe('renderResults', () => {
  it('renders exactly the result set, in order', () => {
    const container = document.createElement('div');
    const items = [listing('P1', 15439, 'severe'), listing('P4', 54000, 'severe'), listing('P18', 76500, 'severe')];
    renderResults(container, items);
    const ids = [...container.querySelectorAll('.card')].map(
      (card) => (card as HTMLElement).dataset.propertyId,
    );
    expect(ids).toEqual(['P1', 'P4', 'P18']);
    const badges = [...container.querySelectorAll('.badge')].map((b) => b.textContent);
    expect(badges).toEqual(['severe', 'severe', 'severe']);
  });

  it('reversing the API order reverses the cards (sort toggle contract)', () => {
    const container = document.createElement('div');
    const ascending = [listing('P1', 1, 'severe'), listing('P2', 2, 'mild'), listing('P3', 3, 'none')];
    renderResults(container, ascending);
    const before = [...container.querySelectorAll('.card')].map(
      (card) => (card as HTMLElement).dataset.propertyId,
    );
    renderResults(container, [...ascending].reverse());
    const after = [...container.querySelectorAll('.card')].map(
      (card) => (card as HTMLElement).dataset.propertyId,
    );
    expect(after).toEqual([...before].reverse());
  });

  it('shows the empty-state message for an empty corpus', () => {
    const container = document.createElement('div');
    renderResults(container, []);
    expect(container.querySelector('.empty-state')?.textContent).toContain('No listings');
    expect(container.querySelectorAll('.card')).toHaveLength(0);
  });

  it('wires the show-damage button to the callback', () => {
    const container = document.createElement('div');
    const clicks: string[] = [];
    renderResults(container, [listing('P4', 54000, 'severe')], (pid) => clicks.push(pid));
    (container.querySelector('.show-damage') as HTMLButtonElement).click();
    expect(clicks).toEqual(['P4']);
  });
});
