/** Collapsible depth-2 rendering of the learned hierarchy. */

import type { Hierarchy, HierarchyMember } from './api.js';

export interface TreeNode {
  label: string;
  detail: string;
  children: TreeNode[];
}

const plural = (n: number, word: string): string =>
  `${n} ${word}${n === 1 ? '' : 's'}`;

const memberNode = (member: HierarchyMember): TreeNode => ({
  label: `object #${member.object_id}`,
  detail: plural(member.visual_object_count, 'view'),
  children: [],
});

export function hierarchyModel(tree: Hierarchy): TreeNode {
  const groups = tree.groups.map((group, index) => ({
    label: `genus group ${index + 1}`,
    detail:
      plural(group.members.length, 'object') +
      ', ' +
      plural(group.genus_visual_object_count, 'shared view'),
    children: group.members.map(memberNode),
  }));
  const isolated = tree.isolated.map(memberNode);
  return {
    label: tree.root,
    detail:
      plural(groups.length, 'group') +
      ', ' +
      plural(isolated.length, 'isolated object'),
    children: [...groups, ...isolated],
  };
}

export function renderTree(node: TreeNode): HTMLElement {
  if (node.children.length === 0) {
    const leaf = document.createElement('div');
    leaf.className = 'tree-leaf';
    leaf.textContent = `${node.label} (${node.detail})`;
    return leaf;
  }
  const details = document.createElement('details');
  details.className = 'tree-node';
  details.open = true;
  const summary = document.createElement('summary');
  summary.textContent = `${node.label} (${node.detail})`;
  details.appendChild(summary);
  const children = document.createElement('div');
  children.className = 'tree-children';
  for (const child of node.children) {
    children.appendChild(renderTree(child));
  }
  details.appendChild(children);
  return details;
}
