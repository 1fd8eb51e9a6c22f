# -*-coding:Utf-8 -*

"""
Ce module contient le classifieur en couches et ses instantanés.

- les classes ``Couche``, ``Propagation``, ``ModeleEnCouches``, ``Instantane``
- les fonctions ``capturer_profond()``, ``restaurer_profond()``, ``enregistrer_modele()``, ``charger_modele()``
"""

from typing import List, Optional, Sequence, Tuple, Final
import copy
import struct
import numpy as np
from lib.erreurs import ErreurConfiguration, ErreurDimension, ErreurFichier, ErreurInstantane
from lib.numerique import Tableau, Graine, empreinte, initialiser_poids, relu, verifier_fini

# Alias de types
Gradient = Tuple[Tableau, Tableau]

# Signature et version du fichier de point de contrôle
signature_modele: Final[bytes] = b"CLILOOP1"
version_modele: Final[int] = 1


class Couche:
    """
    Groupe affine ``x @ poids + biais``. La non-linéarité ReLU est appliquée par le modèle sur toutes les couches sauf
    la dernière.

    :param poids: matrice de forme ``(entrees, sorties)``.
    :param biais: vecteur de forme ``(sorties,)``.
    """

    def __init__(self, poids: Tableau, biais: Tableau) -> None:
        """
        :param poids: matrice de forme ``(entrees, sorties)``.
        :param biais: vecteur de forme ``(sorties,)``.
        :raises ErreurDimension: si ``biais`` ne correspond pas aux sorties de ``poids``.
        """

        self.poids = np.array(poids, dtype=np.float64)
        self.biais = np.array(biais, dtype=np.float64)
        if self.poids.ndim != 2 or self.biais.shape != (self.poids.shape[1],):
            raise ErreurDimension("Poids {0} et biais {1} incompatibles".format(self.poids.shape, self.biais.shape))
        verifier_fini(self.poids, "poids")
        verifier_fini(self.biais, "biais")

    @property
    def entrees(self) -> int:
        return int(self.poids.shape[0])

    @property
    def sorties(self) -> int:
        return int(self.poids.shape[1])


class Propagation:
    """
    Valeurs intermédiaires d'une propagation avant, conservées pour la rétropropagation.

    - ``activations[i]`` est l'entrée de la couche ``i`` (``activations[0]`` est le lot d'entrée).
    - ``pre_activations[i]`` est la sortie affine de la couche ``i``.

    :param activations: entrées de chaque couche.
    :param pre_activations: sorties affines de chaque couche.
    """

    def __init__(self, activations: List[Tableau], pre_activations: List[Tableau]) -> None:
        self.activations = activations
        self.pre_activations = pre_activations

    @property
    def caracteristiques(self) -> Tableau:
        """
        :return: activation avant-dernière ``z``, entrée de la couche de classification.
        """

        return self.activations[-1]

    @property
    def logits(self) -> Tableau:
        return self.pre_activations[-1]


class ModeleEnCouches:
    """
    Perceptron multicouche à ReLU dont les couches sont séparées en couches superficielles (``0 .. separation-1``) et
    profondes (``separation .. L-1``).

    La propagation est une fonction pure des paramètres et de l'entrée. Une instance n'est pas protégée contre les appels
    concurrents : le parallélisme passe par ``copier()``.

    :param couches: couches affines, de l'entrée vers les logits.
    :param separation: nombre de couches superficielles ``H``, dans ``[1, L)``. Un modèle d'une seule couche n'a que
        des couches profondes (``H = 0``).
    """

    def __init__(self, couches: Sequence[Couche], separation: Optional[int] = None) -> None:
        """
        Vérifie l'enchaînement des dimensions et la position de la séparation.
        Par défaut, la seconde moitié des couches est profonde.

        :param couches: couches affines, de l'entrée vers les logits.
        :param separation: nombre de couches superficielles ``H``.
        :raises ErreurConfiguration: si le modèle est vide ou si ``separation`` n'est pas dans ``[1, L)``, ``0`` pour une
            seule couche.
        :raises ErreurDimension: si deux couches successives ne s'enchaînent pas.
        """

        if not couches:
            raise ErreurConfiguration("Un modèle doit contenir au moins une couche")
        for precedente, suivante in zip(couches, couches[1:]):
            if precedente.sorties != suivante.entrees:
                raise ErreurDimension("Les couches ne s'enchaînent pas : {0} sorties pour {1} entrées".format(
                    precedente.sorties, suivante.entrees))
        self.couches: List[Couche] = list(couches)
        if separation is None:
            separation = len(self.couches) // 2
        minimum = 1 if len(self.couches) > 1 else 0
        if not minimum <= separation < len(self.couches):
            raise ErreurConfiguration("La séparation {0} n'est pas comprise dans [{1}, {2})".format(
                separation, minimum, len(self.couches)))
        self.separation = separation

    @classmethod
    def creer(cls, dimensions: Sequence[int], graine: Graine, separation: Optional[int] = None) -> 'ModeleEnCouches':
        """
        Crée un modèle initialisé aléatoirement.

        :param dimensions: ``[d, h1, ..., C]``, au moins deux entiers positifs.
        :param graine: graine de l'initialisation.
        :param separation: nombre de couches superficielles.
        :return: modèle initialisé.
        :raises ErreurConfiguration: si les dimensions sont invalides.
        """

        if len(dimensions) < 2 or any(dimension < 1 for dimension in dimensions):
            raise ErreurConfiguration("Dimensions invalides : {0}".format(list(dimensions)))
        generateur = np.random.default_rng(graine)
        couches = [Couche(initialiser_poids(generateur, entrees, sorties), np.zeros(sorties))
                   for entrees, sorties in zip(dimensions, dimensions[1:])]
        return cls(couches, separation)

    @property
    def dimension_entree(self) -> int:
        return self.couches[0].entrees

    @property
    def nombre_classes(self) -> int:
        return self.couches[-1].sorties

    @property
    def dimensions(self) -> List[int]:
        return [self.dimension_entree] + [couche.sorties for couche in self.couches]

    def __len__(self) -> int:
        """
        :return: nombre de couches ``L``.
        """

        return len(self.couches)

    def debut_suffixe(self, suffixe: Optional[int] = None) -> int:
        """
        Convertit un nombre de couches entraînables (en partant des logits) en indice de la première couche entraînée.

        :param suffixe: nombre de couches finales entraînées. ``None`` pour toutes.
        :return: indice de la première couche du suffixe.
        :raises ErreurConfiguration: si le suffixe est vide ou plus long que le modèle.
        """

        if suffixe is None:
            return 0
        if not 1 <= suffixe <= len(self):
            raise ErreurConfiguration("Le suffixe entraînable doit contenir entre 1 et {0} couches, pas {1}".format(
                len(self), suffixe))
        return len(self) - suffixe

    def parametres(self, debut: int = 0) -> List[Tableau]:
        """
        :param debut: indice de la première couche.
        :return: liste ``[poids, biais, poids, biais, ...]`` des couches ``debut .. L-1`` (références, pas des copies).
        """

        liste: List[Tableau] = []
        for couche in self.couches[debut:]:
            liste.extend((couche.poids, couche.biais))
        return liste

    def propager_lot(self, entrees: Tableau) -> Propagation:
        """
        Propage un lot et conserve les valeurs intermédiaires.

        :param entrees: matrice ``(n, d)``.
        :return: propagation contenant ``z`` et les logits.
        :raises ErreurDimension: si la dimension d'entrée ne correspond pas.
        :raises ErreurNumerique: si une entrée n'est pas finie.
        """

        entrees = np.asarray(entrees, dtype=np.float64)
        if entrees.ndim != 2 or entrees.shape[1] != self.dimension_entree:
            raise ErreurDimension("Entrée de forme {0} pour un modèle de dimension {1}".format(
                entrees.shape, self.dimension_entree))
        verifier_fini(entrees, "entrées")
        activations = [entrees]
        pre_activations: List[Tableau] = []
        for indice, couche in enumerate(self.couches):
            sortie = activations[-1] @ couche.poids + couche.biais
            pre_activations.append(sortie)
            if indice < len(self.couches) - 1:
                activations.append(relu(sortie))
        return Propagation(activations, pre_activations)

    def propager(self, entree: Tableau) -> Tuple[Tableau, Tableau]:
        """
        Propagation avant d'un échantillon ou d'un lot.

        :param entree: vecteur ``(d,)`` ou matrice ``(n, d)``.
        :return: ``(z, logits)`` de même rang que l'entrée.
        """

        entree = np.asarray(entree, dtype=np.float64)
        if entree.ndim == 1:
            propagation = self.propager_lot(entree[np.newaxis, :])
            return propagation.caracteristiques[0], propagation.logits[0]
        propagation = self.propager_lot(entree)
        return propagation.caracteristiques, propagation.logits

    def retropropager(self, propagation: Propagation, gradient_logits: Tableau,
                      gradient_caracteristiques: Optional[Tableau] = None, debut: int = 0) -> List[Gradient]:
        """
        Rétropropage les gradients des logits (et éventuellement de ``z``) jusqu'à la couche ``debut``.
        Les couches antérieures ne reçoivent aucun gradient.

        :param propagation: valeurs intermédiaires de ``propager_lot()``.
        :param gradient_logits: gradient de la perte par rapport aux logits, ``(n, C)``.
        :param gradient_caracteristiques: gradient de la perte par rapport à ``z``, ``(n, f)``.
        :param debut: indice de la première couche entraînée.
        :return: ``[(d_poids, d_biais), ...]`` pour les couches ``debut .. L-1``.
        :raises ErreurConfiguration: si le suffixe est vide.
        :raises ErreurDimension: si un gradient n'a pas la forme attendue.
        """

        if not 0 <= debut < len(self.couches):
            raise ErreurConfiguration("Aucune couche à entraîner à partir de l'indice {0}".format(debut))
        if gradient_logits.shape != propagation.logits.shape:
            raise ErreurDimension("Gradient des logits de forme {0}, attendu {1}".format(
                gradient_logits.shape, propagation.logits.shape))
        if gradient_caracteristiques is not None and gradient_caracteristiques.shape != propagation.caracteristiques.shape:
            raise ErreurDimension("Gradient des caractéristiques de forme {0}, attendu {1}".format(
                gradient_caracteristiques.shape, propagation.caracteristiques.shape))

        gradients: List[Gradient] = []
        gradient = gradient_logits
        derniere = len(self.couches) - 1
        for indice in range(derniere, debut - 1, -1):
            entree = propagation.activations[indice]
            gradients.append((entree.T @ gradient, np.sum(gradient, axis=0)))
            if indice == debut:
                break
            gradient_entree = gradient @ self.couches[indice].poids.T
            if indice == derniere and gradient_caracteristiques is not None:
                gradient_entree = gradient_entree + gradient_caracteristiques
            gradient = gradient_entree * (propagation.pre_activations[indice - 1] > 0)
        gradients.reverse()
        return gradients

    def copier(self) -> 'ModeleEnCouches':
        """
        :return: copie profonde indépendante du modèle.
        """

        return copy.deepcopy(self)

    def empreinte(self, debut: int = 0) -> str:
        """
        :param debut: indice de la première couche hachée.
        :return: empreinte des paramètres des couches ``debut .. L-1``.
        """

        return empreinte(self.parametres(debut))


class Instantane:
    """
    Copie des paramètres des couches ``debut .. L-1`` et de leur empreinte.

    :param debut: indice de la première couche copiée.
    :param parametres: copies des paramètres.
    """

    def __init__(self, debut: int, parametres: List[Tableau]) -> None:
        self.debut = debut
        self.parametres = [np.array(parametre, copy=True) for parametre in parametres]
        self.empreinte = empreinte(self.parametres)


def capturer_profond(modele: ModeleEnCouches, debut: Optional[int] = None) -> Instantane:
    """
    Capture les couches profondes ``Θ_d`` (ou toutes les couches à partir de ``debut``).

    :param modele: modèle à capturer.
    :param debut: indice de la première couche capturée. Par défaut la séparation du modèle.
    :return: instantané.
    """

    if debut is None:
        debut = modele.separation
    return Instantane(debut, modele.parametres(debut))


def restaurer_profond(modele: ModeleEnCouches, instantane: Instantane) -> None:
    """
    Recopie l'instantané dans le modèle, en place. Les couches antérieures à ``instantane.debut`` ne sont pas modifiées.

    :param modele: modèle à restaurer.
    :param instantane: instantané issu de ``capturer_profond()``.
    :raises ErreurInstantane: si l'instantané provient d'un modèle de forme différente.
    """

    cibles = modele.parametres(instantane.debut) if instantane.debut < len(modele) else []
    if len(cibles) != len(instantane.parametres) \
            or any(cible.shape != source.shape for cible, source in zip(cibles, instantane.parametres)):
        raise ErreurInstantane("L'instantané ne correspond pas à la forme du modèle")
    for cible, source in zip(cibles, instantane.parametres):
        np.copyto(cible, source)


def enregistrer_modele(modele: ModeleEnCouches, chemin: str) -> None:
    """
    Écrit le modèle dans un fichier binaire :

    - la signature ``CLILOOP1``
    - l'entête : version, nombre de couches, séparation, puis ``(entrees, sorties)`` par couche (entiers 32 bits
      petit-boutistes)
    - les poids puis les biais de chaque couche (float64 petit-boutistes, ordre ligne par ligne)

    :param modele: modèle à écrire.
    :param chemin: chemin du fichier.
    """

    with open(chemin, "wb") as fichier:
        fichier.write(signature_modele)
        fichier.write(struct.pack('<iii', version_modele, len(modele), modele.separation))
        for couche in modele.couches:
            fichier.write(struct.pack('<ii', couche.entrees, couche.sorties))
        for couche in modele.couches:
            fichier.write(np.ascontiguousarray(couche.poids, dtype='<f8').tobytes())
            fichier.write(np.ascontiguousarray(couche.biais, dtype='<f8').tobytes())


def charger_modele(chemin: str) -> ModeleEnCouches:
    """
    Lit un modèle écrit par ``enregistrer_modele()``.

    :param chemin: chemin du fichier.
    :return: modèle reconstruit.
    :raises ErreurFichier: si la signature, la version ou la taille du fichier ne correspondent pas.
    """

    with open(chemin, "rb") as fichier:
        contenu = fichier.read()
    if contenu[:len(signature_modele)] != signature_modele:
        raise ErreurFichier("Le fichier <{0}> n'est pas un point de contrôle".format(chemin))
    position = len(signature_modele)
    try:
        version, nombre, separation = struct.unpack_from('<iii', contenu, position)
        position += 12
        if version != version_modele:
            raise ErreurFichier("Version de point de contrôle inconnue : {0}".format(version))
        formes = []
        for _ in range(nombre):
            formes.append(struct.unpack_from('<ii', contenu, position))
            position += 8
        couches = []
        for entrees, sorties in formes:
            poids = np.frombuffer(contenu, dtype='<f8', count=entrees * sorties, offset=position)
            position += 8 * entrees * sorties
            biais = np.frombuffer(contenu, dtype='<f8', count=sorties, offset=position)
            position += 8 * sorties
            couches.append(Couche(poids.reshape(entrees, sorties).astype(np.float64), biais.astype(np.float64)))
    except (struct.error, ValueError):
        raise ErreurFichier("Le point de contrôle <{0}> est tronqué".format(chemin))
    if position != len(contenu):
        raise ErreurFichier("Le point de contrôle <{0}> contient des données en trop".format(chemin))
    return ModeleEnCouches(couches, separation)
