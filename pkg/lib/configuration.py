# -*-coding:Utf-8 -*

"""
Ce module contient la configuration d'une exécution de la boucle fermée.

- la classe ``ConfigurationExecution``
- les fonctions ``lire_fichier_configuration()``, ``fusionner()``, ``graine_par_defaut()``
"""

from typing import Any, Callable, Dict, Optional, Final
from dataclasses import dataclass, asdict, fields, replace
import os
from lib.erreurs import ErreurConfiguration

# Variable d'environnement qui fournit la graine par défaut
variable_graine: Final[str] = "CLILOOP_SEED"

modes_connus: Final = ("cluster", "online", "pft")
scores_connus: Final = ("softmax_max", "entropy", "energy")

# Seuil par défaut sur les jeux de test corrompus
epsilon_corrompu: Final[float] = 0.6


def _booleen(valeur: str) -> bool:
    """
    :param valeur: ``true``/``false``, ``oui``/``non``, ``1``/``0``.
    :return: booléen correspondant.
    :raises ValueError: si la valeur n'est pas reconnue.
    """

    minuscule = valeur.strip().lower()
    if minuscule in ("1", "true", "oui", "vrai", "yes"):
        return True
    if minuscule in ("0", "false", "non", "faux", "no"):
        return False
    raise ValueError(valeur)


def _suffixe(valeur: str) -> Optional[int]:
    """
    :param valeur: entier ou ``all``/``tout``/``none``.
    :return: nombre de couches entraînables, ``None`` pour toutes.
    """

    if valeur.strip().lower() in ("all", "tout", "none", ""):
        return None
    return int(valeur)


def _chemin(valeur: str) -> Optional[str]:
    return valeur.strip() or None


@dataclass(frozen=True)
class ConfigurationExecution:
    """
    Paramètres d'une exécution. Valeurs par défaut : seuil 0.7, 400 groupes, top-10, λ = 1, τ = 0.07,
    5 époques par lot de 256, SGD (lr 0.01, moment 0.9, pénalité 1e-4).

    ``suffixe`` est le nombre de couches finales entraînées pendant l'entraînement auxiliaire (``None`` pour toutes).
    ``bruit_augmentation`` est l'écart type du bruit gaussien ajouté aux entrées d'entraînement auxiliaire.
    """

    epsilon: float = 0.7
    groupes: int = 400
    k: int = 10
    lam: float = 1.0
    tau: float = 0.07
    epoques: int = 5
    taille_lot: int = 256
    lr_base: float = 0.01
    moment: float = 0.9
    decroissance: float = 1e-4
    proportion: float = 1.0
    suffixe: Optional[int] = None
    score: str = "softmax_max"
    mode: str = "cluster"
    graine: int = 0
    bruit_augmentation: float = 0.0
    restreindre_top_k: bool = False
    iterations_kmeans: int = 100
    temperature_energie: float = 1.0
    chemin_modele: Optional[str] = None
    chemin_entrainement: Optional[str] = None
    chemin_test: Optional[str] = None
    dossier_sortie: Optional[str] = None

    def valider(self) -> 'ConfigurationExecution':
        """
        Vérifie le domaine de chaque paramètre.

        :return: la configuration elle-même.
        :raises ErreurConfiguration: si un paramètre est hors de son domaine.
        """

        controles = [
            (0 < self.epsilon <= 1, "ε doit être compris dans (0, 1]"),
            (self.groupes >= 1, "Le nombre de groupes doit être positif"),
            (self.k >= 1, "Le nombre de classes K doit être positif"),
            (self.lam >= 0, "λ doit être positif ou nul"),
            (self.tau > 0, "τ doit être strictement positif"),
            (self.epoques >= 0, "Le nombre d'époques doit être positif ou nul"),
            (self.taille_lot >= 1, "La taille de lot doit être positive"),
            (self.lr_base > 0, "Le taux d'apprentissage doit être strictement positif"),
            (0 <= self.moment < 1, "Le moment doit être compris dans [0, 1)"),
            (self.decroissance >= 0, "La pénalité L2 doit être positive ou nulle"),
            (0 < self.proportion <= 1, "La proportion doit être comprise dans (0, 1]"),
            (self.suffixe is None or self.suffixe >= 1, "Le suffixe entraînable doit être positif"),
            (self.score in scores_connus, "Score inconnu : {0}".format(self.score)),
            (self.mode in modes_connus, "Mode inconnu : {0}".format(self.mode)),
            (self.bruit_augmentation >= 0, "Le bruit d'augmentation doit être positif ou nul"),
            (self.iterations_kmeans >= 1, "Le nombre d'itérations de K-means doit être positif"),
            (self.temperature_energie > 0, "La température de l'énergie doit être strictement positive"),
        ]
        for valide, message in controles:
            if not valide:
                raise ErreurConfiguration(message)
        return self

    def vers_dict(self) -> Dict[str, Any]:
        """
        :return: dictionnaire des paramètres, recopié tel quel dans les rapports.
        """

        return asdict(self)

    @classmethod
    def depuis_dict(cls, dictionnaire: Dict[str, Any]) -> 'ConfigurationExecution':
        """
        :param dictionnaire: paramètres, par exemple relus depuis un rapport.
        :return: configuration validée.
        :raises ErreurConfiguration: si une clé est inconnue.
        """

        inconnues = set(dictionnaire) - {champ.name for champ in fields(cls)}
        if inconnues:
            raise ErreurConfiguration("Paramètres inconnus : {0}".format(", ".join(sorted(inconnues))))
        return cls(**dictionnaire).valider()

    def modifier(self, **valeurs: Any) -> 'ConfigurationExecution':
        """
        :return: copie validée avec les valeurs remplacées.
        """

        return replace(self, **valeurs).valider()


convertisseurs: Final[Dict[str, Callable[[str], Any]]] = {
    "epsilon": float, "groupes": int, "k": int, "lam": float, "tau": float, "epoques": int, "taille_lot": int,
    "lr_base": float, "moment": float, "decroissance": float, "proportion": float, "suffixe": _suffixe,
    "score": str.strip, "mode": str.strip, "graine": int, "bruit_augmentation": float,
    "restreindre_top_k": _booleen, "iterations_kmeans": int, "temperature_energie": float,
    "chemin_modele": _chemin, "chemin_entrainement": _chemin, "chemin_test": _chemin, "dossier_sortie": _chemin,
}


def lire_fichier_configuration(chemin: str) -> Dict[str, Any]:
    """
    Lit un fichier de lignes ``cle = valeur``. Les lignes vides et celles qui commencent par ``#`` sont ignorées.

    :param chemin: chemin du fichier.
    :return: paramètres convertis.
    :raises ErreurConfiguration: si une ligne est mal formée, une clé inconnue ou une valeur invalide.
    """

    valeurs: Dict[str, Any] = {}
    with open(chemin, "r", encoding="utf-8") as fichier:
        for numero, ligne in enumerate(fichier, start=1):
            ligne = ligne.strip()
            if not ligne or ligne.startswith("#"):
                continue
            if "=" not in ligne:
                raise ErreurConfiguration("Ligne {0} de <{1}> : '=' attendu".format(numero, chemin))
            cle, valeur = (partie.strip() for partie in ligne.split("=", 1))
            if cle not in convertisseurs:
                raise ErreurConfiguration("Ligne {0} de <{1}> : paramètre inconnu <{2}>".format(numero, chemin, cle))
            try:
                valeurs[cle] = convertisseurs[cle](valeur)
            except ValueError:
                raise ErreurConfiguration("Ligne {0} de <{1}> : valeur invalide <{2}>".format(numero, chemin, valeur))
    return valeurs


def graine_par_defaut() -> int:
    """
    :return: la graine de ``CLILOOP_SEED``, 0 si la variable est absente.
    :raises ErreurConfiguration: si la variable n'est pas un entier.
    """

    try:
        return int(os.environ.get(variable_graine, "0"))
    except ValueError:
        raise ErreurConfiguration("{0} doit être un entier".format(variable_graine))


def fusionner(fichier: Optional[Dict[str, Any]] = None, drapeaux: Optional[Dict[str, Any]] = None,
              defauts: Optional[ConfigurationExecution] = None) -> ConfigurationExecution:
    """
    Résout la configuration : drapeaux > fichier > défauts. Un drapeau à ``None`` n'a pas été saisi.

    :param fichier: valeurs lues par ``lire_fichier_configuration()``.
    :param drapeaux: valeurs des arguments de la ligne de commande.
    :param defauts: configuration de départ, ``ConfigurationExecution(graine=graine_par_defaut())`` par défaut.
    :return: configuration validée.
    """

    if defauts is None:
        defauts = ConfigurationExecution(graine=graine_par_defaut())
    valeurs: Dict[str, Any] = dict(fichier or {})
    valeurs.update({cle: valeur for cle, valeur in (drapeaux or {}).items() if valeur is not None})
    return defauts.modifier(**valeurs)
