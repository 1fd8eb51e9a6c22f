# -*-coding:Utf-8 -*

"""
Ce module contient le rapport des transitions entre prédictions initiales et finales.

- la classe ``LigneEchantillon``
- la classe ``RapportTransitions``
- les fonctions ``categoriser()``, ``lire_rapport()``
"""

from typing import Any, Dict, List, Optional, Sequence, Final
import csv
import json
from lib.erreurs import ErreurDimension

# Catégories de transition, dans l'ordre du rapport
transitions: Final = ("f2t", "t2f", "f2f", "t2t")


def categoriser(etiquette: int, initiale: int, finale: int) -> str:
    """
    :param etiquette: classe vraie.
    :param initiale: top-1 avant la boucle.
    :param finale: top-1 après la boucle.
    :return: ``f2t``, ``t2f``, ``f2f`` ou ``t2t``.
    """

    avant = "t" if initiale == etiquette else "f"
    apres = "t" if finale == etiquette else "f"
    return avant + "2" + apres


class LigneEchantillon:
    """
    Transition d'un échantillon de test.

    :param identifiant: identifiant de l'échantillon.
    :param initiale: top-1 avant la boucle.
    :param finale: top-1 après la boucle.
    :param transition: catégorie de transition.
    :param confiant: l'échantillon a été jugé confiant et n'a pas été reprédit.
    """

    def __init__(self, identifiant: int, initiale: int, finale: int, transition: str, confiant: bool) -> None:
        self.identifiant = identifiant
        self.initiale = initiale
        self.finale = finale
        self.transition = transition
        self.confiant = confiant

    def vers_dict(self) -> Dict[str, Any]:
        return {"id": self.identifiant, "baseline_top1": self.initiale, "final_top1": self.finale,
                "transition": self.transition, "high_confidence": self.confiant}


class RapportTransitions:
    """
    Comptes de transitions, précisions et temps par échantillon d'une exécution.

    Invariants : ``f2t + t2f + f2f + t2t = total`` et ``corrects_final − corrects_base = f2t − t2f``.

    :param lignes: une ligne par échantillon de test, par identifiant croissant.
    :param secondes: durée totale de l'exécution.
    :param configuration: configuration résolue de l'exécution.
    :param extras: informations complémentaires (groupes, empreintes, précision top-5...).
    """

    def __init__(self, lignes: List[LigneEchantillon], secondes: float, configuration: Dict[str, Any],
                 extras: Optional[Dict[str, Any]] = None) -> None:
        self.lignes = lignes
        self.secondes = secondes
        self.configuration = configuration
        self.extras: Dict[str, Any] = extras if extras is not None else {}
        self.comptes: Dict[str, int] = {transition: 0 for transition in transitions}
        for ligne in lignes:
            self.comptes[ligne.transition] += 1
        self.corrects_base = self.comptes["t2f"] + self.comptes["t2t"]
        self.corrects_final = self.comptes["f2t"] + self.comptes["t2t"]

    @classmethod
    def construire(cls, identifiants: Sequence[int], etiquettes: Sequence[int], initiales: Sequence[int],
                   finales: Sequence[int], confiants: Sequence[bool], secondes: float, configuration: Dict[str, Any],
                   extras: Optional[Dict[str, Any]] = None) -> 'RapportTransitions':
        """
        :raises ErreurDimension: si les séquences n'ont pas la même longueur.
        """

        if not len(identifiants) == len(etiquettes) == len(initiales) == len(finales) == len(confiants):
            raise ErreurDimension("Les séquences du rapport n'ont pas la même longueur")
        lignes = [LigneEchantillon(int(identifiant), int(initiale), int(finale),
                                   categoriser(int(etiquette), int(initiale), int(finale)), bool(confiant))
                  for identifiant, etiquette, initiale, finale, confiant
                  in zip(identifiants, etiquettes, initiales, finales, confiants)]
        return cls(lignes, secondes, configuration, extras)

    @property
    def total(self) -> int:
        return len(self.lignes)

    @property
    def precision_base(self) -> float:
        return self.corrects_base / self.total if self.total else 0.0

    @property
    def precision_finale(self) -> float:
        return self.corrects_final / self.total if self.total else 0.0

    @property
    def tpi(self) -> float:
        """
        :return: temps par échantillon, durée totale divisée par le nombre d'échantillons de test.
        """

        return self.secondes / self.total if self.total else 0.0

    def finales(self) -> Dict[int, int]:
        """
        :return: top-1 final par identifiant.
        """

        return {ligne.identifiant: ligne.finale for ligne in self.lignes}

    def vers_dict(self, avec_temps: bool = True) -> Dict[str, Any]:
        """
        :param avec_temps: inclut ``tpi_seconds`` et ``total_seconds``, seules valeurs non déterministes.
        :return: document JSON du rapport.
        """

        document: Dict[str, Any] = {
            "counts": dict(self.comptes),
            "total": self.total,
            "baseline_correct": self.corrects_base,
            "final_correct": self.corrects_final,
            "baseline_acc": self.precision_base,
            "final_acc": self.precision_finale,
            "config": dict(self.configuration),
            "extras": dict(self.extras),
            "per_sample": [ligne.vers_dict() for ligne in self.lignes],
        }
        if avec_temps:
            document["tpi_seconds"] = self.tpi
            document["total_seconds"] = self.secondes
        return document

    def ecrire_json(self, chemin: str) -> None:
        with open(chemin, "w", encoding="utf-8") as fichier:
            json.dump(self.vers_dict(), fichier, indent=2, ensure_ascii=False)

    def ecrire_csv(self, chemin: str) -> None:
        """
        Écrit une ligne par échantillon : ``id,baseline_top1,final_top1,transition,high_confidence``.
        """

        with open(chemin, "w", newline='') as fichier:
            ecrivain = csv.writer(fichier)
            ecrivain.writerow(["id", "baseline_top1", "final_top1", "transition", "high_confidence"])
            for ligne in self.lignes:
                ecrivain.writerow([ligne.identifiant, ligne.initiale, ligne.finale, ligne.transition,
                                   int(ligne.confiant)])

    def resume(self) -> str:
        """
        :return: tableau lisible : précision initiale, finale, écart, #F2T, #T2F et TPI.
        """

        entete = "{0:>10} | {1:>10} | {2:>10} | {3:>6} | {4:>6} | {5:>10}".format(
            "Initiale", "Finale", "Écart", "#F2T", "#T2F", "TPI (s)")
        valeurs = "{0:>9.2f}% | {1:>9.2f}% | {2:>+9.2f} | {3:>6} | {4:>6} | {5:>10.4f}".format(
            100 * self.precision_base, 100 * self.precision_finale,
            100 * (self.precision_finale - self.precision_base), self.comptes["f2t"], self.comptes["t2f"], self.tpi)
        return entete + "\n" + "-" * len(entete) + "\n" + valeurs


def lire_rapport(chemin: str) -> Dict[str, Any]:
    """
    :param chemin: rapport JSON écrit par ``RapportTransitions.ecrire_json()``.
    :return: document relu.
    """

    with open(chemin, "r", encoding="utf-8") as fichier:
        document: Dict[str, Any] = json.load(fichier)
    return document
