/** Application controller: holds the last confirmed API responses and renders
 * the three-area workbench from them. Nothing is shown optimistically; every
 * render reflects state the service has acknowledged.
 */

import { ApiClient, ApiError } from './api.js';
import { el } from './dom.js';
import { renderPatientArea } from './render/consistency.js';
import { renderFilters } from './render/filters.js';
import { renderKnowledgeTable } from './render/knowledgeTable.js';
import { renderParameterExplorer } from './render/parameterExplorer.js';
import { renderTree } from './render/tree.js';
import type {
  FilterState,
  LoadResponse,
  MatchPayload,
  ParametersPayload,
  TreePayload,
} from './types.js';
import { emptyFilter } from './types.js';
import type { SortDirection } from './viewmodel.js';

export interface AppState {
  patient: LoadResponse | null;
  match: MatchPayload | null;
  parameters: ParametersPayload | null;
  tree: TreePayload | null;
  selectedCategoryId: string | null;
  filter: FilterState;
  subset: Set<number>;
  tableSort: { key: 'name' | 'score'; direction: SortDirection };
  explorerSort: { key: 'id' | 'name' | 'difference'; direction: SortDirection };
  status: string;
}

export class App {
  state: AppState = {
    patient: null,
    match: null,
    parameters: null,
    tree: null,
    selectedCategoryId: null,
    filter: emptyFilter(),
    subset: new Set(),
    tableSort: { key: 'score', direction: -1 },
    explorerSort: { key: 'id', direction: 1 },
    status: '',
  };

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private doc: Document,
  ) {}

  async init(): Promise<void> {
    await this.guard(async () => {
      this.state.tree = await this.api.tree();
    });
    this.render();
  }

  /** Run an API interaction; failures land in the status bar and never touch
   * already confirmed state. */
  private async guard(action: () => Promise<void>): Promise<boolean> {
    try {
      await action();
      this.state.status = '';
      return true;
    } catch (error) {
      this.state.status =
        error instanceof ApiError
          ? `service error (${error.status}): ${error.message}`
          : `request failed: ${String(error)}`;
      return false;
    }
  }

  async loadTrialText(text: string): Promise<void> {
    await this.guard(async () => {
      const loaded = await this.api.loadTrial(text);
      this.state.patient = loaded;
      this.state.match = await this.api.match(this.state.filter);
      if (this.state.selectedCategoryId) {
        this.state.parameters = await this.api.parameters(
          this.state.selectedCategoryId,
          this.state.filter,
        );
      }
    });
    this.render();
  }

  async selectCategory(categoryId: string): Promise<void> {
    await this.guard(async () => {
      this.state.parameters = await this.api.parameters(categoryId, this.state.filter);
      this.state.selectedCategoryId = categoryId;
      this.state.subset = new Set();
    });
    this.render();
  }

  async setFilter(filter: FilterState): Promise<void> {
    await this.guard(async () => {
      // Matching results update immediately on every filter change.
      const match = this.state.patient ? await this.api.match(filter) : null;
      const parameters = this.state.selectedCategoryId
        ? await this.api.parameters(this.state.selectedCategoryId, filter)
        : null;
      this.state.filter = filter;
      this.state.match = match;
      this.state.parameters = parameters;
    });
    this.render();
  }

  async applyToSelected(): Promise<void> {
    const categoryId = this.state.selectedCategoryId;
    if (!categoryId) return;
    await this.guard(async () => {
      const subset = [...this.state.subset];
      this.state.match = await this.api.apply(categoryId, subset);
      this.state.tree = await this.api.tree();
      this.state.parameters = await this.api.parameters(categoryId, this.state.filter);
      this.state.subset = new Set();
    });
    this.render();
  }

  async resetSelected(): Promise<void> {
    const categoryId = this.state.selectedCategoryId;
    if (!categoryId) return;
    await this.guard(async () => {
      this.state.tree = await this.api.reset(categoryId);
      this.state.parameters = await this.api.parameters(categoryId, this.state.filter);
      if (this.state.patient) {
        this.state.match = await this.api.match(this.state.filter);
      }
    });
    this.render();
  }

  /** Commit path of an HRS drag (also callable directly, e.g. from tests). */
  async commitOverride(stpId: number, min: number, max: number): Promise<void> {
    const categoryId = this.state.selectedCategoryId;
    if (!categoryId) return;
    await this.guard(async () => {
      this.state.tree = await this.api.overrideRange(categoryId, stpId, min, max);
      this.state.parameters = await this.api.parameters(categoryId, this.state.filter);
      if (this.state.patient) {
        this.state.match = await this.api.match(this.state.filter);
      }
    });
    this.render();
  }

  toggleSubset(stpId: number, checked: boolean): void {
    if (checked) this.state.subset.add(stpId);
    else this.state.subset.delete(stpId);
    this.render();
  }

  sortTable(key: 'name' | 'score'): void {
    const current = this.state.tableSort;
    this.state.tableSort = {
      key,
      direction:
        current.key === key ? ((current.direction * -1) as SortDirection) : key === 'score' ? -1 : 1,
    };
    this.render();
  }

  sortExplorer(key: 'id' | 'name' | 'difference'): void {
    const current = this.state.explorerSort;
    this.state.explorerSort = {
      key,
      direction:
        current.key === key
          ? ((current.direction * -1) as SortDirection)
          : key === 'difference'
            ? -1
            : 1,
    };
    this.render();
  }

  render(): void {
    const doc = this.doc;
    const layout = el(doc, 'div', { class: 'layout' });

    const knowledgeArea = el(doc, 'section', { class: 'area', id: 'knowledge-area' });
    knowledgeArea.append(
      renderFilters(doc, this.state.filter, {
        onChange: (filter) => void this.setFilter(filter),
      }),
      renderKnowledgeTable(
        doc,
        this.state.match,
        this.state.selectedCategoryId,
        this.state.tableSort,
        {
          onSelectCategory: (id) => void this.selectCategory(id),
          onSort: (key) => this.sortTable(key),
        },
      ),
      renderTree(doc, this.state.tree, this.state.selectedCategoryId, {
        onSelectCategory: (id) => void this.selectCategory(id),
      }),
    );

    const patientArea = el(doc, 'section', { class: 'area', id: 'patient-column' });
    patientArea.append(renderPatientArea(doc, this.state.patient));

    const explorerArea = el(doc, 'section', { class: 'area', id: 'explorer-area' });
    const selectedCategory =
      this.state.tree?.categories.find(
        (c) => c.id === this.state.selectedCategoryId,
      ) ?? null;
    explorerArea.append(
      renderParameterExplorer(
        doc,
        this.state.parameters,
        selectedCategory,
        this.state.patient !== null,
        this.state.subset,
        this.state.explorerSort,
        {
          onSort: (key) => this.sortExplorer(key),
          onToggleSubset: (stpId, checked) => this.toggleSubset(stpId, checked),
          onApply: () => void this.applyToSelected(),
          onReset: () => void this.resetSelected(),
          onOverride: (stpId, min, max) => void this.commitOverride(stpId, min, max),
        },
      ),
    );

    layout.append(knowledgeArea, patientArea, explorerArea);

    const status = el(
      doc,
      'div',
      { id: 'status', class: this.state.status ? 'status-error' : 'status-ok' },
      [this.state.status || 'ready'],
    );

    this.root.replaceChildren(layout, status);
  }
}
